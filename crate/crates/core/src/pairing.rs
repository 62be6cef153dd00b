//! Intersection pairings by crossing counts between simplicial cycles and dual-block cycles.
//!
//! A dual block D(σ) is the cone, at the barycentre of σ, over the subdivided link of σ.
//! When that link falls apart into several top-dimensional cycles (as at a pinch point),
//! D(σ) is split accordingly into sheets, one per cycle in a fixed basis. Sheets are
//! the cells of the block complex; for a manifold every block is a single sheet.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{barycentric_subdivision, dual_blocks, is_pseudomanifold, Chain, SimplicialComplex, Subdivision};
use crate::error::{Error, Result, ResultExt};
use crate::gf2::{BitVec, Gf2Matrix};
use crate::ih::{cohomology, compute, homology, CellComplex, IhResult};
use crate::strata::{allowable_masks, Perversity, Stratification};

pub const DEFAULT_SEED: u64 = 0x5eed_1c0d;
pub const DEFAULT_TRIALS: usize = 20;

/// One sheet of the dual block of the `simplex`-th `dim`-simplex.
#[derive(Clone, Debug)]
pub struct Sheet {
    pub dim: usize,
    pub simplex: usize,
    /// Indices of the top simplices of K whose flags make up the sheet.
    pub tops: Vec<usize>,
}

/// The block complex of sheets, optionally relative to a boundary subcomplex L of K.
#[derive(Clone, Debug)]
pub struct SheetComplex {
    pub host: Subdivision,
    pub dim: usize,
    /// `sheets[j]`: sheets of block degree j, i.e. of the (dim - j)-simplices.
    pub sheets: Vec<Vec<Sheet>>,
    /// `chains[j][k]`: sheet k of degree j as a chain of K'.
    pub chains: Vec<Vec<BitVec>>,
    /// `differential[j]`: sheets of degree j to sheets of degree j-1, boundary taken modulo L'.
    pub differential: Vec<Gf2Matrix>,
    /// `full_boundary[j]`: columns are the boundaries in K' of the degree-j sheets, L' part included.
    pub full_boundary: Vec<Gf2Matrix>,
    /// `by_simplex[d][i]`: indices into `sheets[dim - d]` of the sheets of the `i`-th `d`-simplex.
    pub by_simplex: Vec<Vec<Vec<usize>>>,
}

impl SheetComplex {
    pub fn new(k: &SimplicialComplex, l_mask: Option<&[BitVec]>) -> Result<Self> {
        if k.is_empty() || !k.is_pure() {
            return Err(Error::NotPure);
        }
        let n = k.dim();
        let host = barycentric_subdivision(k);
        let kp = &host.complex;
        let in_l = |d: usize, i: usize| l_mask.is_some_and(|m| m.get(d).is_some_and(|row| row.get(i)));
        let lp_mask = l_mask.map(|m| host.subdivided_mask(m));

        // flags of D(σ): K' simplices of degree n - d led by σ, with their top simplex
        let mut flags: Vec<Vec<Vec<(usize, usize)>>> = (0..=n).map(|d| vec![Vec::new(); k.count(d)]).collect();
        for d in 0..=n {
            for (j, s) in kp.simplices(n - d).iter().enumerate() {
                let (ld, li) = host.leader(s);
                if ld == d {
                    let (cd, ci) = host.carrier(s);
                    debug_assert_eq!(cd, n);
                    flags[d][li].push((j, ci));
                }
            }
        }

        let mut sheets: Vec<Vec<Sheet>> = vec![Vec::new(); n + 1];
        let mut chains: Vec<Vec<BitVec>> = vec![Vec::new(); n + 1];
        let mut by_simplex: Vec<Vec<Vec<usize>>> = (0..=n).map(|d| vec![Vec::new(); k.count(d)]).collect();
        for d in 0..=n {
            let j = n - d;
            for (i, sigma) in k.simplices(d).iter().enumerate() {
                let mut tops: Vec<usize> = flags[d][i].iter().map(|&(_, t)| t).collect();
                tops.sort_unstable();
                tops.dedup();
                let cycles: Vec<BitVec> = if d == n {
                    vec![BitVec::from_indices(1, [0])]
                } else {
                    // codimension-one faces containing σ, outside L, each must meet a sheet evenly
                    let mut rows: Vec<usize> = Vec::new();
                    for &t in &tops {
                        let top = k.simplex(n, t);
                        for v in top.iter().filter(|v| !sigma.contains(v)) {
                            let f: Vec<u32> = top.iter().copied().filter(|w| w != v).collect();
                            let fi = k.index_of(&f).expect("face of a top simplex");
                            if !in_l(n - 1, fi) {
                                rows.push(fi);
                            }
                        }
                    }
                    rows.sort_unstable();
                    rows.dedup();
                    let cols = tops
                        .iter()
                        .map(|&t| {
                            let top = k.simplex(n, t);
                            BitVec::from_indices(
                                rows.len(),
                                rows.iter().enumerate().filter(|(_, &f)| crate::complex::is_subset(k.simplex(n - 1, f), top)).map(|(r, _)| r),
                            )
                        })
                        .collect();
                    Gf2Matrix::from_columns(rows.len(), cols).nullspace_basis()
                };
                for z in cycles {
                    let chosen: Vec<usize> = z.ones().map(|c| tops[c]).collect();
                    let chain = BitVec::from_indices(
                        kp.count(j),
                        flags[d][i].iter().filter(|(_, t)| chosen.binary_search(t).is_ok()).map(|&(s, _)| s),
                    );
                    by_simplex[d][i].push(sheets[j].len());
                    sheets[j].push(Sheet { dim: d, simplex: i, tops: chosen });
                    chains[j].push(chain);
                }
            }
        }

        let mut differential = Vec::with_capacity(n + 1);
        let mut full_boundary = Vec::with_capacity(n + 1);
        for j in 0..=n {
            if j == 0 {
                differential.push(Gf2Matrix::zeros(0, sheets[0].len()));
                full_boundary.push(Gf2Matrix::zeros(0, sheets[0].len()));
                continue;
            }
            let bd = kp.boundary_matrix_unchecked(j);
            let mut cols = Vec::with_capacity(sheets[j].len());
            let mut fulls = Vec::with_capacity(sheets[j].len());
            for (s, chain) in chains[j].iter().enumerate() {
                let full = bd.mul_vec(chain);
                let mut rel = full.clone();
                if let Some(lp) = &lp_mask {
                    let drop = BitVec::from_indices(rel.len(), rel.ones().filter(|&x| lp[j - 1].get(x)).collect::<Vec<_>>());
                    rel.xor_assign(&drop);
                }
                let col = decompose(k, &host, n, j - 1, &rel, &sheets, &by_simplex, &chains)
                    .context(format!("boundary of sheet {s} in block degree {j}"))?;
                cols.push(col);
                fulls.push(full);
            }
            differential.push(Gf2Matrix::from_columns(sheets[j - 1].len(), cols));
            full_boundary.push(Gf2Matrix::from_columns(kp.count(j - 1), fulls));
        }
        Ok(SheetComplex { host, dim: n, sheets, chains, differential, full_boundary, by_simplex })
    }

    pub fn count(&self, j: usize) -> usize {
        self.sheets.get(j).map_or(0, Vec::len)
    }

    /// The chain of K' given by a combination of degree-j sheets.
    pub fn chain_of(&self, j: usize, coeffs: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.host.complex.count(j));
        for s in coeffs.ones() {
            out.xor_assign(&self.chains[j][s]);
        }
        out
    }

    /// Per (dim - j)-simplex σ of K, the parity of the number of sheets of σ in the combination.
    pub fn collapse(&self, j: usize, coeffs: &BitVec, simplices: usize) -> BitVec {
        let mut out = BitVec::zeros(simplices);
        for s in coeffs.ones() {
            out.flip(self.sheets[j][s].simplex);
        }
        out
    }

    fn cell_complex(&self, strat: &Stratification, p: &Perversity) -> CellComplex {
        let kp = &self.host.complex;
        let kp_strat = strat.induced_on_subdivision(&self.host);
        let masks = allowable_masks(kp, &kp_strat, p);
        let n = self.dim;
        let allowed = (0..=n)
            .map(|j| BitVec::from_indices(self.count(j), (0..self.count(j)).filter(|&s| self.chains[j][s].is_subset_of(&masks[j]))))
            .collect();
        let constraint = (0..=n)
            .map(|j| {
                if j == 0 {
                    Gf2Matrix::zeros(0, self.count(0))
                } else {
                    let mut bad = masks[j - 1].clone();
                    bad.xor_assign(&BitVec::from_indices(kp.count(j - 1), 0..kp.count(j - 1)));
                    self.full_boundary[j].select_rows(&bad)
                }
            })
            .collect();
        let keep = (0..=n).map(|j| BitVec::from_indices(self.count(j), 0..self.count(j))).collect();
        CellComplex { differential: self.differential.clone(), allowed, constraint, keep }
    }
}

/// Writes a K' chain of degree `j` made of whole sheets as a sheet combination.
#[allow(clippy::too_many_arguments)]
fn decompose(
    k: &SimplicialComplex,
    host: &Subdivision,
    n: usize,
    j: usize,
    chain: &BitVec,
    sheets: &[Vec<Sheet>],
    by_simplex: &[Vec<Vec<usize>>],
    chains: &[Vec<BitVec>],
) -> Result<BitVec> {
    let kp = &host.complex;
    let d = n - j;
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for x in chain.ones() {
        let s = kp.simplex(j, x);
        let (ld, li) = host.leader(s);
        if ld != d {
            return Err(Error::Inconsistent(format!("boundary simplex {:?} is not a full flag", kp.simplex_names(s))));
        }
        groups.entry(li).or_default().push(host.carrier(s).1);
    }
    let mut out = BitVec::zeros(sheets[j].len());
    for (li, mut tops) in groups {
        tops.sort_unstable();
        tops.dedup();
        let own = &by_simplex[d][li];
        let mut all: Vec<usize> = own.iter().flat_map(|&s| sheets[j][s].tops.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        let pos = |t: usize| all.binary_search(&t).ok();
        let cols = own
            .iter()
            .map(|&s| BitVec::from_indices(all.len(), sheets[j][s].tops.iter().map(|&t| pos(t).expect("own top"))))
            .collect();
        let target = tops.iter().map(|&t| pos(t)).collect::<Option<Vec<_>>>().ok_or_else(|| {
            Error::Inconsistent(format!("boundary leaves the sheets of simplex {:?}", k.simplex_names(k.simplex(d, li))))
        })?;
        let x = Gf2Matrix::from_columns(all.len(), cols)
            .solve(&BitVec::from_indices(all.len(), target))
            .ok_or_else(|| Error::Inconsistent(format!("boundary is not a sum of sheets at {:?}", k.simplex_names(k.simplex(d, li)))))?;
        for c in x.ones() {
            out.set(own[c], true);
        }
    }
    let mut check = BitVec::zeros(chain.len());
    for s in out.ones() {
        check.xor_assign(&chains[j][s]);
    }
    if &check != chain {
        return Err(Error::Inconsistent("boundary is not a union of whole sheets".into()));
    }
    Ok(out)
}

/// Intersection homology presented by sheet chains.
#[derive(Clone, Debug)]
pub struct DualBlockIh {
    pub sheets: SheetComplex,
    /// Degrees are block degrees; representatives are sheet combinations.
    pub result: IhResult,
}

impl DualBlockIh {
    pub fn betti(&self) -> Vec<usize> {
        self.result.betti()
    }

    /// Representatives of degree `j` as chains of K'.
    pub fn representative_chains(&self, j: usize) -> Vec<Chain> {
        self.result
            .representatives(j)
            .iter()
            .map(|c| Chain { degree: j, coeffs: self.sheets.chain_of(j, c) })
            .collect()
    }
}

pub fn dual_block_ih(k: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Result<DualBlockIh> {
    let report = is_pseudomanifold(k);
    if !report.is_closed() {
        return Err(Error::NotPseudomanifold("dual-block homology needs a closed pseudomanifold".into()));
    }
    dual_block_ih_masked(k, strat, p, None)
}

/// Closed-support classes of the pair (K, L): all sheets, boundaries taken modulo L'.
pub fn dual_block_ih_relative(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    strat: &Stratification,
    p: &Perversity,
) -> Result<DualBlockIh> {
    if !is_pseudomanifold(k).is_pseudomanifold() {
        return Err(Error::NotPseudomanifold("dual-block homology needs a pseudomanifold".into()));
    }
    let mask = k.subcomplex_mask(l)?;
    dual_block_ih_masked(k, strat, p, Some(&mask))
}

fn dual_block_ih_masked(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, mask: Option<&[BitVec]>) -> Result<DualBlockIh> {
    let sheets = SheetComplex::new(k, mask)?;
    let result = compute(&sheets.cell_complex(strat, p))?;
    Ok(DualBlockIh { sheets, result })
}

/// Change of basis between the simplicial and the dual-block presentation in one degree.
#[derive(Clone, Debug)]
pub struct Transport {
    pub degree: usize,
    /// Column r: the r-th dual-block class in the simplicial basis.
    pub matrix: Gf2Matrix,
    /// Column c: the c-th simplicial class in the dual-block basis.
    pub inverse: Gf2Matrix,
}

/// Everything needed to compare the two presentations of IH(K) or IH(K, L), computed once.
pub struct Presentations {
    pub k: SimplicialComplex,
    pub strat: Stratification,
    pub p: Perversity,
    /// Simplicial classes of K (absolute).
    pub absolute: IhResult,
    /// Simplicial classes of the dual side: IH(K, L) for pairs, IH(K) otherwise.
    pub target: IhResult,
    /// The same groups computed on K' with the carrier stratification.
    pub subdivided: IhResult,
    pub dual: DualBlockIh,
    pub relative: bool,
}

impl Presentations {
    pub fn closed(k: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Result<Self> {
        let dual = dual_block_ih(k, strat, p)?;
        let absolute = crate::ih::ih_groups(k, strat, p)?;
        Self::assemble(k, strat, p, absolute.clone(), absolute, dual, None)
    }

    pub fn pair(k: &SimplicialComplex, l: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Result<Self> {
        let dual = dual_block_ih_relative(k, l, strat, p)?;
        let absolute = crate::ih::ih_groups(k, strat, p)?;
        let target = crate::ih::ih_groups_relative(k, l, strat, p)?;
        let mask = k.subcomplex_mask(l)?;
        Self::assemble(k, strat, p, absolute, target, dual, Some(mask))
    }

    fn assemble(
        k: &SimplicialComplex,
        strat: &Stratification,
        p: &Perversity,
        absolute: IhResult,
        target: IhResult,
        dual: DualBlockIh,
        mask: Option<Vec<BitVec>>,
    ) -> Result<Self> {
        let host = &dual.sheets.host;
        let kp_strat = strat.induced_on_subdivision(host);
        let lp = mask.as_ref().map(|m| host.subdivided_mask(m));
        let subdivided = compute(&CellComplex::simplicial(&host.complex, &kp_strat, p, lp.as_deref()))?;
        Ok(Presentations {
            k: k.clone(),
            strat: strat.clone(),
            p: p.clone(),
            absolute,
            target,
            subdivided,
            dual,
            relative: mask.is_some(),
        })
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    /// Transport in degree `j` of the dual side.
    pub fn transport(&self, j: usize) -> Result<Transport> {
        let host = &self.dual.sheets.host;
        let b = self.target.betti_at(j);
        let bd = self.dual.result.betti_at(j);
        if b != bd {
            return Err(Error::PresentationsDisagree {
                degree: j,
                detail: format!("simplicial dimension {b}, dual-block dimension {bd}"),
            });
        }
        let simp: Vec<BitVec> = self.target.representatives(j).iter().map(|a| host.sd[j].mul_vec(a)).collect();
        let s = self.subdivided.coordinate_matrix(j, &simp).context("subdivided simplicial classes")?;
        let chains: Vec<BitVec> = self.dual.representative_chains(j).into_iter().map(|c| c.coeffs).collect();
        let d = self.subdivided.coordinate_matrix(j, &chains).map_err(|e| Error::PresentationsDisagree {
            degree: j,
            detail: format!("a dual-block class is not an intersection cycle of K': {e}"),
        })?;
        let s_inv = s.inverse().ok_or_else(|| Error::PresentationsDisagree {
            degree: j,
            detail: "subdivision is not an isomorphism on simplicial classes".into(),
        })?;
        let matrix = s_inv.mul(&d);
        let inverse = matrix.inverse().ok_or_else(|| Error::PresentationsDisagree {
            degree: j,
            detail: "dual-block classes do not span".into(),
        })?;
        Ok(Transport { degree: j, matrix, inverse })
    }

    /// Pairing of simplicial degree-i classes of K with dual-side classes of degree dim - i.
    pub fn pairing(&self, i: usize, seed: u64, trials: usize) -> Result<PairingMatrix> {
        let n = self.dim();
        if i > n {
            return Err(Error::DegreeOutOfRange { degree: i, dim: n });
        }
        let j = n - i;
        let t = self.transport(j)?;
        let rows: Vec<BitVec> = self.absolute.representatives(i).to_vec();
        let dual_reps = self.dual.result.representatives(j);
        let cols: Vec<BitVec> = (0..t.inverse.cols())
            .map(|c| {
                let mut v = BitVec::zeros(self.dual.sheets.count(j));
                for r in t.inverse.column(c).ones() {
                    v.xor_assign(&dual_reps[r]);
                }
                v
            })
            .collect();
        let matrix = self.crossings(i, &rows, &cols);
        let a_moves = &self.absolute.degrees[i].boundary_generators;
        let b_moves = &self.dual.result.degrees[j].boundary_generators;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for trial in 0..trials {
            let rows2: Vec<BitVec> = rows.iter().map(|a| perturb(a, a_moves, &mut rng)).collect();
            let cols2: Vec<BitVec> = cols.iter().map(|b| perturb(b, b_moves, &mut rng)).collect();
            let m2 = self.crossings(i, &rows2, &cols2);
            for r in 0..matrix.rows() {
                for c in 0..matrix.cols() {
                    if m2.get(r, c) != matrix.get(r, c) {
                        return Err(Error::RepresentativeInstability { trial, row: r, col: c });
                    }
                }
            }
        }
        let nonsingular = matrix.rows() == matrix.cols() && matrix.is_invertible();
        Ok(PairingMatrix { degrees: (i, j), matrix, nonsingular, trials_passed: trials, seed })
    }

    fn crossings(&self, i: usize, rows: &[BitVec], cols: &[BitVec]) -> Gf2Matrix {
        let n = self.dim();
        let collapsed: Vec<BitVec> = cols.iter().map(|b| self.dual.sheets.collapse(n - i, b, self.k.count(i))).collect();
        let mut m = Gf2Matrix::zeros(rows.len(), cols.len());
        for (r, a) in rows.iter().enumerate() {
            for (c, b) in collapsed.iter().enumerate() {
                m.set(r, c, a.dot(b));
            }
        }
        m
    }
}

fn perturb(v: &BitVec, moves: &[BitVec], rng: &mut ChaCha8Rng) -> BitVec {
    let mut out = v.clone();
    for m in moves {
        if rng.gen::<bool>() {
            out.xor_assign(m);
        }
    }
    out
}

/// A pairing matrix between complementary-degree groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    pub degrees: (usize, usize),
    /// Rows index the first group's basis, columns the second's.
    pub matrix: Gf2Matrix,
    pub nonsingular: bool,
    pub trials_passed: usize,
    pub seed: u64,
}

pub fn dual_transport(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, j: usize) -> Result<Transport> {
    Presentations::closed(k, strat, p)?.transport(j)
}

/// Intersection pairing IH_i(K) x IH_{n-i}(K) on a closed pseudomanifold.
pub fn pairing_matrix(
    k: &SimplicialComplex,
    strat: &Stratification,
    p: &Perversity,
    i: usize,
    seed: u64,
    trials: usize,
) -> Result<PairingMatrix> {
    Presentations::closed(k, strat, p)?.pairing(i, seed, trials)
}

/// Pairing of absolute classes of K with classes of (K, L), of complementary degree.
pub fn pairing_matrix_pair(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    strat: &Stratification,
    p: &Perversity,
    i: usize,
    seed: u64,
    trials: usize,
) -> Result<PairingMatrix> {
    Presentations::pair(k, l, strat, p)?.pairing(i, seed, trials)
}

/// The duality map of a pairing, from the first group to the dual of the second.
pub fn duality_map(p: &PairingMatrix) -> Gf2Matrix {
    p.matrix.transpose()
}

pub fn is_nonsingular(p: &PairingMatrix) -> bool {
    p.matrix.rows() == p.matrix.cols() && p.matrix.is_invertible()
}

/// Coordinates, in the homology basis of K, of chains of K' that are cycles.
fn descend(k_hom: &IhResult, kp_hom: &IhResult, sub: &Subdivision, d: usize, chains: &[BitVec]) -> Result<Gf2Matrix> {
    let simp: Vec<BitVec> = k_hom.representatives(d).iter().map(|a| sub.sd[d].mul_vec(a)).collect();
    let s = kp_hom.coordinate_matrix(d, &simp)?;
    let s_inv = s
        .inverse()
        .ok_or_else(|| Error::Inconsistent(format!("subdivision is not an isomorphism in degree {d}")))?;
    Ok(s_inv.mul(&kp_hom.coordinate_matrix(d, chains)?))
}

/// The block chain Σ f(σ) D(σ) of K' for a cochain f on the (n-i)-simplices.
fn block_chain(blocks: &crate::complex::DualBlockComplex, n: usize, i: usize, f: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(blocks.host.complex.count(i));
    for s in f.ones() {
        out.xor_assign(&blocks.blocks[n - i][s].coeffs);
    }
    out
}

/// Poincaré duality homomorphism H^{n-i}(K) -> H_i(K) of a closed pseudomanifold.
pub fn pd_hom(k: &SimplicialComplex, i: usize) -> Result<Gf2Matrix> {
    let n = k.dim();
    if i > n {
        return Err(Error::DegreeOutOfRange { degree: i, dim: n });
    }
    let blocks = dual_blocks(k)?;
    let co = cohomology(k, None)?;
    let h = homology(k)?;
    let hp = homology(&blocks.host.complex)?;
    let chains: Vec<BitVec> = co.representatives(n - i).iter().map(|f| block_chain(&blocks, n, i, f)).collect();
    descend(&h, &hp, &blocks.host, i, &chains)
}

/// Which Lefschetz duality map of a pair (K, L).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lefschetz {
    /// H^{n-i}(K) -> H_i(K, L).
    ToRelative,
    /// H^{n-i}(K, L) -> H_i(K).
    ToAbsolute,
}

pub fn pd_hom_pair(k: &SimplicialComplex, l: &SimplicialComplex, i: usize, which: Lefschetz) -> Result<Gf2Matrix> {
    let n = k.dim();
    if i > n {
        return Err(Error::DegreeOutOfRange { degree: i, dim: n });
    }
    let mask = k.subcomplex_mask(l)?;
    let blocks = dual_blocks(k)?;
    let sub = &blocks.host;
    let lp = sub.subdivided_mask(&mask);
    let trivial = Stratification::trivial(k);
    let trivial_p = Stratification::trivial(&sub.complex);
    let zero = Perversity::zero();
    let (co, h, hp) = match which {
        Lefschetz::ToRelative => (
            cohomology(k, None)?,
            compute(&CellComplex::simplicial(k, &trivial, &zero, Some(&mask)))?,
            compute(&CellComplex::simplicial(&sub.complex, &trivial_p, &zero, Some(&lp)))?,
        ),
        Lefschetz::ToAbsolute => (cohomology(k, Some(&mask))?, homology(k)?, homology(&sub.complex)?),
    };
    let chains: Vec<BitVec> = co.representatives(n - i).iter().map(|f| block_chain(&blocks, n, i, f)).collect();
    descend(&h, &hp, sub, i, &chains)
}

/// The map H^{n-i}(K) -> IH_i(K) given by sending a cocycle to its block chain.
pub fn cohomology_to_ih(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, i: usize) -> Result<Gf2Matrix> {
    let n = k.dim();
    if i > n {
        return Err(Error::DegreeOutOfRange { degree: i, dim: n });
    }
    let blocks = dual_blocks(k)?;
    let sub = &blocks.host;
    let co = cohomology(k, None)?;
    let ih = crate::ih::ih_groups(k, strat, p)?;
    let ihp = crate::ih::ih_groups(&sub.complex, &strat.induced_on_subdivision(sub), p)?;
    let chains: Vec<BitVec> = co.representatives(n - i).iter().map(|f| block_chain(&blocks, n, i, f)).collect();
    descend(&ih, &ihp, sub, i, &chains).context("block chains of cocycles in intersection homology")
}

/// Kronecker matrix: entry (r, c) evaluates the c-th cocycle on the r-th cycle.
pub fn kronecker(h: &IhResult, co: &IhResult, i: usize) -> Gf2Matrix {
    let rows = h.representatives(i);
    let cols = co.representatives(i);
    let mut m = Gf2Matrix::zeros(rows.len(), cols.len());
    for (r, a) in rows.iter().enumerate() {
        for (c, f) in cols.iter().enumerate() {
            m.set(r, c, a.dot(f));
        }
    }
    m
}

/// The pairing H_i(K) x H_{n-i}(K) obtained from the duality homomorphism: (a, b) -> <PD⁻¹ b, a>.
pub fn pd_pairing(k: &SimplicialComplex, i: usize) -> Result<PairingMatrix> {
    let n = k.dim();
    let j = n - i;
    let kr = kronecker(&homology(k)?, &cohomology(k, None)?, i);
    let d = pd_hom(k, j)?;
    pd_pairing_from(kr, d, (i, j))
}

/// The pairing H_i(K) x H_{n-i}(K, L) obtained from the Lefschetz map H^i(K) -> H_{n-i}(K, L).
pub fn pd_pairing_pair(k: &SimplicialComplex, l: &SimplicialComplex, i: usize) -> Result<PairingMatrix> {
    let n = k.dim();
    let j = n - i;
    let kr = kronecker(&homology(k)?, &cohomology(k, None)?, i);
    let d = pd_hom_pair(k, l, j, Lefschetz::ToRelative)?;
    pd_pairing_from(kr, d, (i, j))
}

fn pd_pairing_from(kr: Gf2Matrix, d: Gf2Matrix, degrees: (usize, usize)) -> Result<PairingMatrix> {
    let inv = d
        .inverse()
        .ok_or_else(|| Error::Inconsistent(format!("duality homomorphism into degree {} is not invertible", degrees.1)))?;
    let matrix = kr.mul(&inv);
    let nonsingular = matrix.rows() == matrix.cols() && matrix.is_invertible();
    Ok(PairingMatrix { degrees, matrix, nonsingular, trials_passed: 0, seed: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    fn trivial(k: &SimplicialComplex) -> Stratification {
        Stratification::trivial(k)
    }

    #[test]
    fn manifold_blocks_have_one_sheet() {
        let t = models::torus_complex();
        let sc = SheetComplex::new(&t, None).unwrap();
        for d in 0..=2 {
            assert_eq!(sc.count(2 - d), t.count(d));
        }
    }

    #[test]
    fn pinch_vertex_block_splits_in_two() {
        let m = models::model("pinched_rp2").unwrap();
        let sc = SheetComplex::new(&m.complex, None).unwrap();
        assert_eq!(sc.count(2), m.complex.count(0) + 1);
        for j in 1..=2 {
            assert!(sc.differential[j - 1].mul(&sc.differential[j]).is_zero());
        }
    }

    #[test]
    fn dual_block_betti() {
        let s2 = models::sphere(2);
        let z = Perversity::zero();
        assert_eq!(dual_block_ih(&s2, &trivial(&s2), &z).unwrap().betti(), vec![1, 0, 1]);
        let t = models::torus_complex();
        assert_eq!(dual_block_ih(&t, &trivial(&t), &z).unwrap().betti(), vec![1, 2, 1]);
        let x = models::model("pinched_rp2").unwrap();
        assert_eq!(dual_block_ih(&x.complex, &x.strat, &z).unwrap().result.betti_at(1), 1);
    }

    #[test]
    fn transports_are_invertible() {
        let z = Perversity::zero();
        let s2 = models::sphere(2);
        assert_eq!(dual_transport(&s2, &trivial(&s2), &z, 0).unwrap().matrix, Gf2Matrix::identity(1));
        let t = models::torus_complex();
        assert!(dual_transport(&t, &trivial(&t), &z, 1).unwrap().matrix.is_invertible());
        let x = models::model("pinched_rp2").unwrap();
        let tr = dual_transport(&x.complex, &x.strat, &z, 1).unwrap();
        assert_eq!(tr.matrix, Gf2Matrix::identity(1));
    }

    #[test]
    fn sphere_point_against_fundamental_class() {
        let s2 = models::sphere(2);
        let p = pairing_matrix(&s2, &trivial(&s2), &Perversity::zero(), 0, DEFAULT_SEED, 5).unwrap();
        assert_eq!(p.matrix, Gf2Matrix::identity(1));
        assert!(is_nonsingular(&p));
    }

    #[test]
    fn duality_map_shapes() {
        let one = PairingMatrix { degrees: (0, 0), matrix: Gf2Matrix::identity(1), nonsingular: true, trials_passed: 0, seed: 0 };
        assert!(is_nonsingular(&one));
        let zero = PairingMatrix { matrix: Gf2Matrix::zeros(1, 1), ..one.clone() };
        assert!(!is_nonsingular(&zero));
        let wide = PairingMatrix { matrix: Gf2Matrix::zeros(1, 2), ..one };
        assert!(!is_nonsingular(&wide));
        assert_eq!(duality_map(&wide).rows(), 2);
    }

    #[test]
    fn pd_is_invertible_on_closed_manifolds() {
        for k in [models::sphere(2), models::torus_complex(), models::rp2_complex(), models::klein_bottle_complex()] {
            for i in 0..=2 {
                assert!(pd_hom(&k, i).unwrap().is_invertible());
            }
        }
    }

    #[test]
    fn block_pairing_matches_pd_pairing() {
        for k in [models::torus_complex(), models::rp2_complex()] {
            let pres = Presentations::closed(&k, &trivial(&k), &Perversity::zero()).unwrap();
            for i in 0..=2 {
                assert_eq!(pres.pairing(i, 1, 3).unwrap().matrix, pd_pairing(&k, i).unwrap().matrix);
            }
        }
    }

    #[test]
    fn cone_on_sphere_pairs_point_with_relative_class() {
        let s2 = models::sphere(2);
        let (c, cs, _) = crate::strata::cone(&s2, &trivial(&s2));
        let p = pairing_matrix_pair(&c, &s2, &cs, &Perversity::zero(), 0, DEFAULT_SEED, 5).unwrap();
        assert_eq!(p.matrix, Gf2Matrix::identity(1));
    }

    #[test]
    fn lefschetz_maps_on_the_solid_torus() {
        let m = models::model("solid_torus_pair").unwrap();
        let b = m.boundary.unwrap();
        for i in 0..=3 {
            assert!(pd_hom_pair(&m.complex, &b, i, Lefschetz::ToRelative).unwrap().is_invertible());
            assert!(pd_hom_pair(&m.complex, &b, i, Lefschetz::ToAbsolute).unwrap().is_invertible());
        }
    }
}
