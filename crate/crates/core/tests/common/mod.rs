//! Brute-force homology by enumerating every chain, for complexes with at most
//! twelve simplices in each degree. No linear algebra is shared with the engine.

#![allow(dead_code)]

use std::collections::HashSet;

use ihcore::complex::SimplicialComplex;
use ihcore::strata::{Perversity, Stratification};

pub const MAX_PER_DEGREE: usize = 12;

pub fn small_enough(k: &SimplicialComplex) -> bool {
    k.counts().iter().all(|&c| c <= MAX_PER_DEGREE)
}

/// Boundary of a chain given as a bitmask over the d-simplices, as a bitmask over the (d-1)-simplices.
fn boundary_mask(k: &SimplicialComplex, d: usize, chain: u32) -> u32 {
    if d == 0 {
        return 0;
    }
    let mut out = 0u32;
    for (i, s) in k.simplices(d).iter().enumerate() {
        if chain >> i & 1 == 1 {
            for drop in 0..s.len() {
                let f: Vec<u32> = s.iter().enumerate().filter(|&(j, _)| j != drop).map(|(_, &v)| v).collect();
                out ^= 1 << k.index_of(&f).unwrap();
            }
        }
    }
    out
}

/// Whether a single simplex obeys the dimension bound for every singular stratum it meets.
fn simplex_ok(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, d: usize, i: usize) -> bool {
    let s = k.simplex(d, i);
    let n = s.len();
    for mask in 1u32..(1 << n) {
        let face: Vec<u32> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
        let fd = face.len() - 1;
        let stratum = strat.stratum_of(fd, k.index_of(&face).unwrap());
        let c = strat.codim(stratum);
        if c >= 1 && fd as i64 > d as i64 - c as i64 + p.value(c) {
            return false;
        }
    }
    true
}

struct Tables {
    ok: Vec<u32>,
    bd: Vec<Vec<u32>>,
}

impl Tables {
    fn new(k: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Self {
        let n = k.dim();
        let ok = (0..=n)
            .map(|d| (0..k.count(d)).filter(|&i| simplex_ok(k, strat, p, d, i)).fold(0u32, |m, i| m | 1 << i))
            .collect();
        let bd = (0..=n).map(|d| (0..k.count(d)).map(|i| boundary_mask(k, d, 1 << i)).collect()).collect();
        Tables { ok, bd }
    }

    fn boundary(&self, d: usize, chain: u32) -> u32 {
        self.bd[d].iter().enumerate().filter(|&(i, _)| chain >> i & 1 == 1).fold(0, |m, (_, b)| m ^ b)
    }

    /// Allowable support and allowable boundary support.
    fn intersection(&self, d: usize, chain: u32) -> bool {
        chain & !self.ok[d] == 0 && (d == 0 || self.boundary(d, chain) & !self.ok[d - 1] == 0)
    }
}

/// Betti numbers of the allowable chains of (K, L) by enumeration; `l` masks the simplices of L.
/// A relative class is represented by its part off L; it is a cycle (or boundary) when some
/// completion by a chain of L is an intersection chain with boundary in L (or a boundary).
pub fn brute_betti(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, l: Option<&[u32]>) -> Vec<usize> {
    assert!(small_enough(k));
    let n = k.dim();
    let t = Tables::new(k, strat, p);
    let lmask = |d: usize| l.map_or(0, |m| m.get(d).copied().unwrap_or(0));
    let off = |d: usize| !lmask(d) & ((1u32 << k.count(d)) - 1);
    (0..=n)
        .map(|d| {
            let lower = if d == 0 { 0 } else { lmask(d - 1) };
            let cycles: HashSet<u32> = subsets(off(d))
                .filter(|&c| {
                    subsets(lmask(d)).any(|e| t.intersection(d, c | e) && (d == 0 || t.boundary(d, c | e) & !lower == 0))
                })
                .collect();
            let boundaries: HashSet<u32> = if d == n {
                HashSet::from([0])
            } else {
                subsets(off(d + 1))
                    .flat_map(|c| subsets(lmask(d + 1)).map(move |e| c | e))
                    .filter(|&x| t.intersection(d + 1, x))
                    .map(|x| t.boundary(d + 1, x) & !lmask(d))
                    .collect()
            };
            assert!(boundaries.is_subset(&cycles), "a boundary is not a cycle in degree {d}");
            let ratio = cycles.len() / boundaries.len();
            assert_eq!(ratio * boundaries.len(), cycles.len());
            ratio.trailing_zeros() as usize
        })
        .collect()
}

fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
        Some(cur)
    })
}

pub fn mask_of(k: &SimplicialComplex, l: &SimplicialComplex) -> Vec<u32> {
    let emb = k.embedding_of(l).unwrap();
    (0..=k.dim())
        .map(|d| emb.get(d).map_or(0, |row| row.iter().fold(0u32, |m, &i| m | 1 << i)))
        .collect()
}
