//! The long exact sequence of a pair, its dual, the ladder of duality maps between
//! them, and the middle-degree parity test for a cone on an even-dimensional link.

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result, ResultExt};
use crate::gf2::{BitVec, Gf2Matrix, MatrixRows};
use crate::ih::{compute, ih_groups, CellComplex, IhResult};
use crate::pairing::{pd_pairing, pd_pairing_pair, PairingMatrix, Presentations};
use crate::strata::{self, Perversity, Stratification};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    /// Groups of the subcomplex L.
    Sub,
    /// Absolute groups of K (compact supports on the open star).
    Total,
    /// Groups of the pair (K, L) (closed supports on the open star).
    Relative,
    /// Anything else, for user-supplied sequences.
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Space {
    pub label: String,
    pub kind: SpaceKind,
    pub degree: i64,
    pub dim: usize,
    /// Whether this is the dual of the space described by the other fields.
    pub dual: bool,
}

/// A finite sequence of spaces with `maps[k]` going from `spaces[k]` to `spaces[k + 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequence {
    pub spaces: Vec<Space>,
    pub maps: Vec<Gf2Matrix>,
}

impl ExactSequence {
    /// Checks shapes only; exactness is a separate question (`check_exact`).
    pub fn new(spaces: Vec<Space>, maps: Vec<Gf2Matrix>) -> Result<Self> {
        if !spaces.is_empty() && maps.len() + 1 != spaces.len() {
            return Err(Error::DimensionMismatch(format!("{} spaces need {} maps, got {}", spaces.len(), spaces.len() - 1, maps.len())));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.cols() != spaces[k].dim || m.rows() != spaces[k + 1].dim {
                return Err(Error::DimensionMismatch(format!(
                    "map {k} is {}x{} but goes from `{}` (dim {}) to `{}` (dim {})",
                    m.rows(),
                    m.cols(),
                    spaces[k].label,
                    spaces[k].dim,
                    spaces[k + 1].label,
                    spaces[k + 1].dim
                )));
            }
        }
        Ok(ExactSequence { spaces, maps })
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    /// Position of the space with the given kind and degree, ignoring duals.
    pub fn position(&self, kind: SpaceKind, degree: i64) -> Option<usize> {
        self.spaces.iter().position(|s| s.kind == kind && s.degree == degree && !s.dual)
    }

    /// First pair of consecutive maps whose composite is nonzero.
    pub fn first_nonzero_composite(&self) -> Option<usize> {
        (1..self.maps.len()).find(|&k| !self.maps[k].mul(&self.maps[k - 1]).is_zero())
    }

    pub fn to_rows(&self) -> SequenceRows {
        SequenceRows { spaces: self.spaces.clone(), maps: self.maps.iter().map(MatrixRows::from).collect() }
    }
}

/// Serializable form of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceRows {
    pub spaces: Vec<Space>,
    pub maps: Vec<MatrixRows>,
}

fn embed(emb: &[usize], len: usize, v: &BitVec) -> BitVec {
    BitVec::from_indices(len, v.ones().map(|i| emb[i]))
}

fn restrict(emb: &[usize], v: &BitVec) -> Option<BitVec> {
    let out = BitVec::from_indices(emb.len(), (0..emb.len()).filter(|&i| v.get(emb[i])));
    (embed(emb, v.len(), &out) == *v).then_some(out)
}

/// The intersection homology sequence of the pair (K, L), from degree dim K down to the zero space
/// in degree -1. At each degree i the spaces are IH_i(L), IH_i(K), IH_i(K, L), in that order.
pub fn les_pair(k: &SimplicialComplex, l: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Result<ExactSequence> {
    let emb = k.embedding_of(l)?;
    let mask = k.subcomplex_mask(l)?;
    let l_strat = strat.restrict(k, l)?;
    let hl = ih_groups(l, &l_strat, p).context("groups of the subcomplex")?;
    let hk = ih_groups(k, strat, p).context("absolute groups")?;
    let hr = compute(&CellComplex::simplicial(k, strat, p, Some(&mask))).context("relative groups")?;
    les_from_groups(k, &emb, &hl, &hk, &hr)
}

pub(crate) fn les_from_groups(
    k: &SimplicialComplex,
    emb: &[Vec<usize>],
    hl: &IhResult,
    hk: &IhResult,
    hr: &IhResult,
) -> Result<ExactSequence> {
    let n = k.dim();
    let lb = |i: usize| hl.degrees.get(i).map_or(0, |d| d.betti());
    let mut spaces = Vec::with_capacity(3 * n + 4);
    let mut maps = Vec::with_capacity(3 * n + 3);
    for i in (0..=n).rev() {
        spaces.push(Space { label: format!("IH_{i}(L)"), kind: SpaceKind::Sub, degree: i as i64, dim: lb(i), dual: false });
        spaces.push(Space { label: format!("IH_{i}(K)"), kind: SpaceKind::Total, degree: i as i64, dim: hk.betti_at(i), dual: false });
        spaces.push(Space { label: format!("IH_{i}(K,L)"), kind: SpaceKind::Relative, degree: i as i64, dim: hr.betti_at(i), dual: false });

        // alpha: inclusion
        let alpha = if lb(i) == 0 {
            Gf2Matrix::zeros(hk.betti_at(i), 0)
        } else {
            let cycles: Vec<BitVec> = hl.representatives(i).iter().map(|z| embed(&emb[i], k.count(i), z)).collect();
            hk.coordinate_matrix(i, &cycles).context(format!("inclusion in degree {i}"))?
        };
        maps.push(alpha);
        // beta: quotient
        maps.push(hr.coordinate_matrix(i, hk.representatives(i)).context(format!("quotient in degree {i}"))?);
        // delta: boundary of a relative representative, read in L
        let target = if i == 0 { 0 } else { lb(i - 1) };
        let delta = if i == 0 || target == 0 {
            Gf2Matrix::zeros(target, hr.betti_at(i))
        } else {
            let bd = k.boundary_matrix_unchecked(i);
            let cycles = hr
                .representatives(i)
                .iter()
                .map(|c| {
                    restrict(&emb[i - 1], &bd.mul_vec(c))
                        .ok_or_else(|| Error::Inconsistent(format!("boundary of a relative class of degree {i} leaves L")))
                })
                .collect::<Result<Vec<_>>>()?;
            hl.coordinate_matrix(i - 1, &cycles).context(format!("connecting map in degree {i}"))?
        };
        maps.push(delta);
    }
    spaces.push(Space { label: "IH_-1(L)".into(), kind: SpaceKind::Sub, degree: -1, dim: 0, dual: false });
    let seq = ExactSequence::new(spaces, maps)?;
    if let Some(k) = seq.first_nonzero_composite() {
        return Err(Error::Inconsistent(format!("composite of maps {} and {k} is nonzero", k - 1)));
    }
    Ok(seq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Junction {
    pub position: usize,
    pub label: String,
    pub dim: usize,
    pub dim_ker: usize,
    pub dim_im: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub junctions: Vec<Junction>,
    pub exact: bool,
}

impl ExactnessReport {
    pub fn failing(&self) -> Vec<usize> {
        self.junctions.iter().filter(|j| !j.exact).map(|j| j.position).collect()
    }
}

/// Exactness at every space with a map on both sides.
pub fn check_exact(seq: &ExactSequence) -> ExactnessReport {
    let mut junctions = Vec::new();
    for k in 1..seq.spaces.len().saturating_sub(1) {
        let incoming = &seq.maps[k - 1];
        let outgoing = &seq.maps[k];
        let dim = seq.spaces[k].dim;
        let dim_ker = dim - outgoing.rank();
        let dim_im = incoming.rank();
        let composite_zero = outgoing.mul(incoming).is_zero();
        junctions.push(Junction {
            position: k,
            label: seq.spaces[k].label.clone(),
            dim,
            dim_ker,
            dim_im,
            composite_zero,
            exact: composite_zero && dim_ker == dim_im,
        });
    }
    let exact = junctions.iter().all(|j| j.exact);
    ExactnessReport { junctions, exact }
}

fn dual_label(label: &str) -> String {
    match label.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{label}*"),
    }
}

/// The dual sequence: spaces in reverse order, each replaced by its dual, maps transposed.
pub fn dualize(seq: &ExactSequence) -> ExactSequence {
    let spaces = seq
        .spaces
        .iter()
        .rev()
        .map(|s| Space { label: dual_label(&s.label), dual: !s.dual, ..s.clone() })
        .collect();
    let maps = seq.maps.iter().rev().map(|m| m.transpose()).collect();
    ExactSequence { spaces, maps }
}

/// The top sequence, its dual, and at each position k a map from `top[k]` to `bottom[k]`.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub top: ExactSequence,
    pub bottom: ExactSequence,
    pub verticals: Vec<Gf2Matrix>,
}

/// Builds the ladder whose k-th vertical is the duality map of `pairings[k]`, a pairing of
/// `top[k]` (rows) with `top[len - 1 - k]` (columns). `None` is accepted between zero spaces.
pub fn ladder(top: &ExactSequence, pairings: &[Option<PairingMatrix>]) -> Result<Ladder> {
    let len = top.len();
    if pairings.len() != len {
        return Err(Error::DimensionMismatch(format!("{len} positions but {} pairings", pairings.len())));
    }
    let bottom = dualize(top);
    let mut verticals = Vec::with_capacity(len);
    for (k, p) in pairings.iter().enumerate() {
        let (r, c) = (top.spaces[k].dim, bottom.spaces[k].dim);
        let v = match p {
            Some(p) => {
                if p.matrix.rows() != r || p.matrix.cols() != c {
                    return Err(Error::DimensionMismatch(format!(
                        "pairing at `{}` is {}x{}, the spaces have dimensions {r} and {c}",
                        top.spaces[k].label,
                        p.matrix.rows(),
                        p.matrix.cols()
                    )));
                }
                p.matrix.transpose()
            }
            None if r == 0 && c == 0 => Gf2Matrix::zeros(0, 0),
            None => {
                return Err(Error::DimensionMismatch(format!("no pairing supplied at `{}`", top.spaces[k].label)));
            }
        };
        verticals.push(v);
    }
    Ok(Ladder { top: top.clone(), bottom, verticals })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square {
    pub position: usize,
    pub from: String,
    pub to: String,
    pub commutes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativityReport {
    pub squares: Vec<Square>,
    pub commutes: bool,
}

/// Each square k: bottom map k after vertical k equals vertical k+1 after top map k.
pub fn check_commutes(ladder: &Ladder) -> CommutativityReport {
    let squares: Vec<Square> = (0..ladder.top.maps.len())
        .map(|k| {
            let left = ladder.bottom.maps[k].mul(&ladder.verticals[k]);
            let right = ladder.verticals[k + 1].mul(&ladder.top.maps[k]);
            Square {
                position: k,
                from: ladder.top.spaces[k].label.clone(),
                to: ladder.top.spaces[k + 1].label.clone(),
                commutes: left == right,
            }
        })
        .collect();
    let commutes = squares.iter().all(|s| s.commutes);
    CommutativityReport { squares, commutes }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertical {
    pub position: usize,
    pub label: String,
    pub rows: usize,
    pub cols: usize,
    pub invertible: bool,
}

fn vertical(ladder: &Ladder, k: usize) -> Vertical {
    let v = &ladder.verticals[k];
    Vertical {
        position: k,
        label: ladder.top.spaces[k].label.clone(),
        rows: v.rows(),
        cols: v.cols(),
        invertible: v.rows() == v.cols() && v.is_invertible(),
    }
}

pub fn verticals(ladder: &Ladder) -> Vec<Vertical> {
    (0..ladder.verticals.len()).map(|k| vertical(ladder, k)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityOutcome {
    /// The three middle verticals are invertible, so the middle Betti number is even.
    Even,
    /// Some middle vertical is not invertible.
    DualityFails,
}

impl ParityOutcome {
    pub fn describe(self) -> &'static str {
        match self {
            ParityOutcome::Even => "parity obstruction vanishes: Iχ even",
            ParityOutcome::DualityFails => "duality fails",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityVerdict {
    pub middle_degree: usize,
    pub link_ih_euler: i64,
    pub middle_betti: usize,
    pub dim_ker_alpha: usize,
    /// Verticals at IH_{k+1}(K,L), IH_k(L) and IH_k(K).
    pub checked: Vec<Vertical>,
    pub failing: Vec<String>,
    pub outcome: ParityOutcome,
}

/// The parity argument at the middle degree k of a ladder built by `les_pair` on a pair whose
/// subcomplex has dimension 2k. Inconsistencies in either direction are errors.
pub fn thom_parity(ladder: &Ladder, k: usize) -> Result<ParityVerdict> {
    let top = &ladder.top;
    let total_dim = top
        .spaces
        .iter()
        .filter(|s| s.kind == SpaceKind::Total)
        .map(|s| s.degree)
        .max()
        .ok_or_else(|| Error::MisCentredLadder(k, "the sequence has no absolute groups".into()))?;
    let link_dim = total_dim - 1;
    if link_dim != 2 * k as i64 {
        return Err(Error::MisCentredLadder(k, format!("the subcomplex has dimension {link_dim}")));
    }
    let k64 = k as i64;
    let find = |kind, d| {
        top.position(kind, d)
            .ok_or_else(|| Error::MisCentredLadder(k, format!("no {kind:?} space in degree {d}")))
    };
    let rel = find(SpaceKind::Relative, k64 + 1)?;
    let sub = find(SpaceKind::Sub, k64)?;
    let tot = find(SpaceKind::Total, k64)?;
    let checked: Vec<Vertical> = [rel, sub, tot].iter().map(|&p| vertical(ladder, p)).collect();
    let failing: Vec<String> = checked.iter().filter(|v| !v.invertible).map(|v| v.label.clone()).collect();
    let link_ih_euler: i64 = top
        .spaces
        .iter()
        .filter(|s| s.kind == SpaceKind::Sub && s.degree >= 0)
        .map(|s| if s.degree % 2 == 0 { s.dim as i64 } else { -(s.dim as i64) })
        .sum();
    let middle_betti = top.spaces[sub].dim;
    let dim_ker_alpha = middle_betti - top.maps[sub].rank();
    let outcome = if failing.is_empty() {
        if middle_betti != 2 * dim_ker_alpha {
            return Err(Error::Inconsistent(format!(
                "middle verticals invertible but b_{k} = {middle_betti} and dim ker α = {dim_ker_alpha}"
            )));
        }
        if link_ih_euler % 2 != 0 {
            return Err(Error::Inconsistent(format!("middle verticals invertible but Iχ = {link_ih_euler} is odd")));
        }
        ParityOutcome::Even
    } else {
        ParityOutcome::DualityFails
    };
    Ok(ParityVerdict { middle_degree: k, link_ih_euler, middle_betti, dim_ker_alpha, checked, failing, outcome })
}

fn transposed(p: PairingMatrix) -> PairingMatrix {
    PairingMatrix { degrees: (p.degrees.1, p.degrees.0), matrix: p.matrix.transpose(), ..p }
}

fn zero_pairing(rows: usize, cols: usize) -> PairingMatrix {
    PairingMatrix { degrees: (0, 0), matrix: Gf2Matrix::zeros(rows, cols), nonsingular: rows == 0 && cols == 0, trials_passed: 0, seed: 0 }
}

/// Per-position pairings for a `les_pair` sequence, from a pairing on L and a pairing of K with (K, L).
fn assemble_pairings(
    top: &ExactSequence,
    n: usize,
    mut on_sub: impl FnMut(usize) -> Result<PairingMatrix>,
    mut on_pair: impl FnMut(usize) -> Result<PairingMatrix>,
) -> Result<Vec<Option<PairingMatrix>>> {
    let len = top.len();
    top.spaces
        .iter()
        .enumerate()
        .map(|(pos, s)| {
            let partner = &top.spaces[len - 1 - pos];
            if s.dim == 0 || partner.dim == 0 {
                return Ok(Some(zero_pairing(s.dim, partner.dim)));
            }
            let i = s.degree as usize;
            let p = match s.kind {
                SpaceKind::Sub => on_sub(i)?,
                SpaceKind::Total => on_pair(i)?,
                SpaceKind::Relative => transposed(on_pair(n - i)?),
                SpaceKind::Other => return Err(Error::DimensionMismatch(format!("no pairing for `{}`", s.label))),
            };
            Ok(Some(p))
        })
        .collect()
}

/// Ladder pairings from crossing counts with dual-block cycles.
pub fn ih_ladder_pairings(
    top: &ExactSequence,
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    strat: &Stratification,
    p: &Perversity,
    seed: u64,
    trials: usize,
) -> Result<Vec<Option<PairingMatrix>>> {
    let l_strat = strat.restrict(k, l)?;
    let sub = Presentations::closed(l, &l_strat, p).context("pairing on the subcomplex")?;
    let pair = Presentations::pair(k, l, strat, p).context("pairing on the pair")?;
    assemble_pairings(top, k.dim(), |i| sub.pairing(i, seed, trials), |i| pair.pairing(i, seed, trials))
}

/// Ladder pairings from the Poincaré and Lefschetz duality homomorphisms of a manifold pair.
pub fn pd_ladder_pairings(top: &ExactSequence, k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Vec<Option<PairingMatrix>>> {
    assemble_pairings(top, k.dim(), |i| pd_pairing(l, i), |i| pd_pairing_pair(k, l, i))
}

/// Everything the cone-on-a-link pipeline computes, in serializable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub link_dim: usize,
    pub perversity: String,
    pub link_ih_betti: Vec<usize>,
    pub link_ih_euler: i64,
    pub star_compact_betti: Vec<usize>,
    pub star_closed_betti: Vec<usize>,
    pub sequence: SequenceRows,
    pub exactness: ExactnessReport,
    pub link_pairings: Vec<PairingRows>,
    pub star_pairings: Vec<PairingRows>,
    pub verticals: Vec<Vertical>,
    pub commutativity: CommutativityReport,
    pub parity: ParityVerdict,
    pub seed: u64,
    pub trials: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingRows {
    pub degrees: (usize, usize),
    pub matrix: MatrixRows,
    pub nonsingular: bool,
    pub trials_passed: usize,
}

impl From<&PairingMatrix> for PairingRows {
    fn from(p: &PairingMatrix) -> Self {
        PairingRows { degrees: p.degrees, matrix: MatrixRows::from(&p.matrix), nonsingular: p.nonsingular, trials_passed: p.trials_passed }
    }
}

/// Cone on X, its sequence against X, the pairings, the ladder and the parity verdict.
pub fn star_obstruction_report(
    x: &SimplicialComplex,
    strat: &Stratification,
    p: &Perversity,
    seed: u64,
    trials: usize,
) -> Result<ObstructionReport> {
    let m = x.dim();
    if !m.is_multiple_of(2) {
        return Err(Error::MisCentredLadder(m / 2, format!("the link has odd dimension {m}")));
    }
    let (ck, cs, _) = strata::cone(x, strat);
    let top = les_pair(&ck, x, &cs, p).context("sequence of the cone pair")?;
    let exactness = check_exact(&top);
    let x_strat = cs.restrict(&ck, x)?;
    let sub = Presentations::closed(x, &x_strat, p).context("pairing on the link")?;
    let pair = Presentations::pair(&ck, x, &cs, p).context("pairing on the star")?;
    let link_pairings: Vec<PairingMatrix> = (0..=m).map(|i| sub.pairing(i, seed, trials)).collect::<Result<_>>()?;
    let star_pairings: Vec<PairingMatrix> = (0..=m + 1).map(|i| pair.pairing(i, seed, trials)).collect::<Result<_>>()?;
    let pairings = assemble_pairings(&top, m + 1, |i| Ok(link_pairings[i].clone()), |i| Ok(star_pairings[i].clone()))?;
    let lad = ladder(&top, &pairings)?;
    let commutativity = check_commutes(&lad);
    let parity = thom_parity(&lad, m / 2)?;
    Ok(ObstructionReport {
        link_dim: m,
        perversity: p.describe(),
        link_ih_betti: sub.absolute.betti(),
        link_ih_euler: sub.absolute.euler_characteristic(),
        star_compact_betti: pair.absolute.betti(),
        star_closed_betti: pair.target.betti(),
        sequence: top.to_rows(),
        exactness,
        link_pairings: link_pairings.iter().map(PairingRows::from).collect(),
        star_pairings: star_pairings.iter().map(PairingRows::from).collect(),
        verticals: verticals(&lad),
        commutativity,
        parity,
        seed,
        trials,
    })
}
