//! Intersection homology of stratified complexes, ordinary homology and cohomology.
//!
//! Everything here reduces to one engine: a graded space of cells with a
//! differential, a mask of allowed cells, a matrix of linear constraints that
//! an intersection chain must satisfy, and a mask of cells kept after
//! quotienting by a subcomplex. Homology is then cycles modulo boundaries of
//! the constrained subcomplex, computed with the fixed pivot order of `gf2`.

use crate::complex::{Chain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::gf2::{quotient_basis, BitVec, Gf2Matrix, QuotientBasis};
use crate::strata::{allowable_masks, Perversity, Stratification};

/// Input to the homology engine, indexed by degree `0..=top`.
#[derive(Clone, Debug)]
pub(crate) struct CellComplex {
    /// `differential[d]`: cells of degree d -> cells of degree d-1 (`differential[0]` has no rows).
    pub differential: Vec<Gf2Matrix>,
    /// Cells an intersection chain may use.
    pub allowed: Vec<BitVec>,
    /// `constraint[d] * c = 0` is required of an intersection chain `c` of degree d.
    pub constraint: Vec<Gf2Matrix>,
    /// Cells that survive the quotient by a subcomplex (all set when absolute).
    pub keep: Vec<BitVec>,
}

impl CellComplex {
    fn size(&self, d: usize) -> usize {
        self.differential[d].cols()
    }

    /// Builds the allowable simplicial chain complex of (K, L).
    pub fn simplicial(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, l_mask: Option<&[BitVec]>) -> Self {
        let n = if k.is_empty() { 0 } else { k.dim() };
        let allowed = allowable_masks(k, strat, p);
        let differential: Vec<Gf2Matrix> = (0..=n).map(|d| k.boundary_matrix_unchecked(d)).collect();
        let constraint = (0..=n)
            .map(|d| {
                if d == 0 {
                    Gf2Matrix::zeros(0, k.count(0))
                } else {
                    let mut bad = allowed[d - 1].clone();
                    bad.xor_assign(&BitVec::from_indices(k.count(d - 1), 0..k.count(d - 1)));
                    differential[d].select_rows(&bad)
                }
            })
            .collect();
        let keep = (0..=n)
            .map(|d| {
                let all = BitVec::from_indices(k.count(d), 0..k.count(d));
                match l_mask {
                    Some(m) => {
                        let mut kept = all;
                        if let Some(md) = m.get(d) {
                            kept.xor_assign(md);
                        }
                        kept
                    }
                    None => all,
                }
            })
            .collect();
        Self { differential, allowed, constraint, keep }
    }
}

/// Homology in one degree.
#[derive(Clone, Debug)]
pub struct DegreeHomology {
    pub degree: usize,
    /// Representative cycles, as vectors over the ambient cells (lifts, for relative groups).
    pub representatives: Vec<BitVec>,
    /// Generators of the intersection chains one degree up, pushed down by the differential.
    pub boundary_generators: Vec<BitVec>,
    /// Basis of the intersection chains in this degree.
    pub chain_basis: Vec<BitVec>,
    quotient: QuotientBasis,
    keep: BitVec,
}

impl DegreeHomology {
    pub fn betti(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of a (relative) cycle in the representative basis.
    pub fn coordinates(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.keep.len() {
            return Err(Error::ChainLength { expected: self.keep.len(), got: v.len() });
        }
        self.quotient.coordinates(&v.compress(&self.keep))
    }
}

/// Homology groups of a cell complex: betti numbers, representatives and coordinates.
#[derive(Clone, Debug)]
pub struct IhResult {
    pub degrees: Vec<DegreeHomology>,
}

impl IhResult {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(DegreeHomology::betti).collect()
    }

    pub fn betti_at(&self, d: usize) -> usize {
        self.degrees.get(d).map_or(0, DegreeHomology::betti)
    }

    pub fn degree(&self, d: usize) -> Option<&DegreeHomology> {
        self.degrees.get(d)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti().iter().enumerate().map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn representatives(&self, d: usize) -> &[BitVec] {
        self.degrees.get(d).map_or(&[], |h| h.representatives.as_slice())
    }

    pub fn coordinates(&self, d: usize, v: &BitVec) -> Result<BitVec> {
        match self.degrees.get(d) {
            Some(h) => h.coordinates(v),
            None => Ok(BitVec::zeros(0)),
        }
    }

    /// Matrix whose columns are the coordinates of the given cycles in degree `d`.
    pub fn coordinate_matrix(&self, d: usize, cycles: &[BitVec]) -> Result<Gf2Matrix> {
        let rows = self.betti_at(d);
        let cols = cycles.iter().map(|c| self.coordinates(d, c)).collect::<Result<Vec<_>>>()?;
        Ok(Gf2Matrix::from_columns(rows, cols))
    }
}

pub(crate) fn compute(cx: &CellComplex) -> Result<IhResult> {
    let top = cx.differential.len();
    // intersection chains per degree
    let mut chain_basis: Vec<Vec<BitVec>> = Vec::with_capacity(top);
    for d in 0..top {
        let allowed: Vec<usize> = cx.allowed[d].ones().collect();
        let restricted = cx.constraint[d].select_cols(&allowed);
        let basis = restricted
            .nullspace_basis()
            .into_iter()
            .map(|v| BitVec::from_indices(cx.size(d), v.ones().map(|j| allowed[j])))
            .collect();
        chain_basis.push(basis);
    }
    let mut degrees = Vec::with_capacity(top);
    for d in 0..top {
        let keep = &cx.keep[d];
        let gens = &chain_basis[d];
        // relative boundaries of each generator, projected
        let images: Vec<BitVec> = if d == 0 {
            vec![BitVec::zeros(0); gens.len()]
        } else {
            gens.iter().map(|g| cx.differential[d].mul_vec(g).compress(&cx.keep[d - 1])).collect()
        };
        let rows = if d == 0 { 0 } else { cx.keep[d - 1].count_ones() };
        let cycle_coeffs = Gf2Matrix::from_columns(rows, images).nullspace_basis();
        let lifts: Vec<BitVec> = cycle_coeffs
            .iter()
            .map(|c| {
                let mut v = BitVec::zeros(cx.size(d));
                for j in c.ones() {
                    v.xor_assign(&gens[j]);
                }
                v
            })
            .collect();
        let projected: Vec<BitVec> = lifts.iter().map(|v| v.compress(keep)).collect();
        let boundary_generators: Vec<BitVec> = if d + 1 < top {
            chain_basis[d + 1].iter().map(|g| cx.differential[d + 1].mul_vec(g)).collect()
        } else {
            Vec::new()
        };
        let boundaries: Vec<BitVec> = boundary_generators.iter().map(|b| b.compress(keep)).collect();
        let quotient = quotient_basis(keep.count_ones(), &projected, &boundaries)
            .map_err(|e| e.context(format!("degree {d}: boundaries are not cycles")))?;
        let representatives = quotient.chosen.iter().map(|&i| lifts[i].clone()).collect();
        degrees.push(DegreeHomology {
            degree: d,
            representatives,
            boundary_generators,
            chain_basis: chain_basis[d].clone(),
            quotient,
            keep: keep.clone(),
        });
    }
    Ok(IhResult { degrees })
}

/// Allowable chains: per degree, a basis of IC_i and the boundary maps.
pub struct AllowableComplex {
    pub basis: Vec<Vec<Chain>>,
}

pub fn allowable_complex(k: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Result<AllowableComplex> {
    let cx = CellComplex::simplicial(k, strat, p, None);
    let res = compute(&cx)?;
    let basis = res
        .degrees
        .iter()
        .map(|h| h.chain_basis.iter().map(|v| Chain { degree: h.degree, coeffs: v.clone() }).collect())
        .collect();
    Ok(AllowableComplex { basis })
}

pub fn ih_groups(k: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Result<IhResult> {
    compute(&CellComplex::simplicial(k, strat, p, None))
}

/// Relative intersection homology of (K, L), L a subcomplex matched by vertex names.
pub fn ih_groups_relative(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    strat: &Stratification,
    p: &Perversity,
) -> Result<IhResult> {
    let mask = k.subcomplex_mask(l)?;
    compute(&CellComplex::simplicial(k, strat, p, Some(&mask)))
}

pub fn homology(k: &SimplicialComplex) -> Result<IhResult> {
    ih_groups(k, &Stratification::trivial(k), &Perversity::zero())
}

pub fn homology_relative(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<IhResult> {
    ih_groups_relative(k, l, &Stratification::trivial(k), &Perversity::zero())
}

pub fn euler_char(k: &SimplicialComplex) -> Result<i64> {
    Ok(homology(k)?.euler_characteristic())
}

pub fn i_euler_char(k: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Result<i64> {
    Ok(ih_groups(k, strat, p)?.euler_characteristic())
}

/// The natural map IH_i -> H_i, in the computed bases.
pub fn forget_map(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, i: usize) -> Result<Gf2Matrix> {
    let ih = ih_groups(k, strat, p)?;
    let h = homology(k)?;
    forget_matrix(&ih, &h, i)
}

pub fn forget_matrix(ih: &IhResult, h: &IhResult, i: usize) -> Result<Gf2Matrix> {
    h.coordinate_matrix(i, ih.representatives(i))
}

/// Simplicial cohomology H^k(K), or H^k(K, L) when `l_mask` is given, with
/// `degrees[k]` in cohomological degree. Representatives are cochains.
pub fn cohomology(k: &SimplicialComplex, l_mask: Option<&[BitVec]>) -> Result<IhResult> {
    let n = k.dim();
    // engine degree e carries cochains of degree n - e; its differential is the coboundary
    let differential: Vec<Gf2Matrix> = (0..=n)
        .map(|e| {
            let kd = n - e;
            if e == 0 {
                Gf2Matrix::zeros(0, k.count(kd))
            } else {
                k.boundary_matrix_unchecked(kd + 1).transpose()
            }
        })
        .collect();
    let allowed: Vec<BitVec> = (0..=n)
        .map(|e| {
            let kd = n - e;
            let all = BitVec::from_indices(k.count(kd), 0..k.count(kd));
            match l_mask {
                Some(m) => {
                    let mut a = all;
                    a.xor_assign(&m[kd]);
                    a
                }
                None => all,
            }
        })
        .collect();
    let constraint = (0..=n).map(|e| Gf2Matrix::zeros(0, k.count(n - e))).collect();
    let keep = (0..=n).map(|e| BitVec::from_indices(k.count(n - e), 0..k.count(n - e))).collect();
    let mut res = compute(&CellComplex { differential, allowed, constraint, keep })?;
    res.degrees.reverse();
    for (kd, h) in res.degrees.iter_mut().enumerate() {
        h.degree = kd;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{barycentric_subdivision, SimplicialComplex};
    use crate::models;

    #[test]
    fn sphere_and_torus() {
        let s2 = models::sphere(2);
        assert_eq!(homology(&s2).unwrap().betti(), vec![1, 0, 1]);
        let t = models::torus_complex();
        assert_eq!(homology(&t).unwrap().betti(), vec![1, 2, 1]);
        assert_eq!(euler_char(&s2).unwrap(), 2);
    }

    #[test]
    fn relative_examples() {
        let s2 = models::sphere(2);
        let (c, _) = s2.cone("v");
        assert_eq!(homology_relative(&c, &s2).unwrap().betti(), vec![0, 0, 0, 1]);
        assert_eq!(homology_relative(&s2, &s2).unwrap().betti(), vec![0, 0, 0]);
        let circle = models::sphere(1);
        let (disk, _) = circle.cone("v");
        assert_eq!(homology_relative(&disk, &circle).unwrap().betti(), vec![0, 0, 1]);
    }

    #[test]
    fn representatives_have_identity_coordinates() {
        let t = models::torus_complex();
        let h = homology(&t).unwrap();
        for d in 0..=2 {
            let m = h.coordinate_matrix(d, h.representatives(d)).unwrap();
            assert_eq!(m, Gf2Matrix::identity(h.betti_at(d)));
        }
    }

    #[test]
    fn trivial_stratification_gives_full_chains() {
        let t = models::torus_complex();
        let ac = allowable_complex(&t, &Stratification::trivial(&t), &Perversity::zero()).unwrap();
        for d in 0..=2 {
            assert_eq!(ac.basis[d].len(), t.count(d));
        }
    }

    #[test]
    fn cohomology_matches_homology_ranks() {
        let t = models::torus_complex();
        assert_eq!(cohomology(&t, None).unwrap().betti(), vec![1, 2, 1]);
        let rp2 = models::rp2_complex();
        assert_eq!(cohomology(&rp2, None).unwrap().betti(), vec![1, 1, 1]);
        let circle = models::sphere(1);
        let (disk, _) = circle.cone("v");
        let mask = disk.subcomplex_mask(&circle).unwrap();
        assert_eq!(cohomology(&disk, Some(&mask)).unwrap().betti(), vec![0, 0, 1]);
    }

    #[test]
    fn subdivision_preserves_homology() {
        for k in [models::torus_complex(), models::rp2_complex(), models::sphere(2)] {
            let sd = barycentric_subdivision(&k);
            assert_eq!(homology(&k).unwrap().betti(), homology(&sd.complex).unwrap().betti());
        }
    }

    #[test]
    fn non_cycle_has_no_coordinates() {
        let k = SimplicialComplex::build(&[vec!["a", "b"]]).unwrap();
        let h = homology(&k).unwrap();
        assert!(h.coordinates(1, &BitVec::from_bits(&[1])).is_err());
    }
}
