mod common;

use proptest::prelude::*;

use ihcore::complex::{barycentric_subdivision, Chain, SimplicialComplex};
use ihcore::gf2::{quotient_basis, BitVec, Gf2Matrix};
use ihcore::ih::{allowable_complex, ih_groups, ih_groups_relative};
use ihcore::models::{self, ModelKind};
use ihcore::pairing::{Presentations, SheetComplex};
use ihcore::sequences::{check_exact, dualize, ExactSequence, Space, SpaceKind};
use ihcore::strata::{is_intersection_chain, Perversity, Stratification};

fn complex_strategy() -> impl Strategy<Value = SimplicialComplex> {
    (3u32..=6, 1usize..=3, prop::collection::vec(prop::collection::vec(0u32..6, 4), 1..=5))
        .prop_filter_map("small complex", |(nv, dim, raw)| {
            let dim = dim.min(nv as usize - 1);
            let tops: Vec<Vec<String>> = raw
                .iter()
                .map(|r| {
                    let mut vs: Vec<u32> = Vec::new();
                    for v in r.iter().map(|v| v % nv).chain(0..nv) {
                        if !vs.contains(&v) {
                            vs.push(v);
                        }
                    }
                    vs.truncate(dim + 1);
                    vs.iter().map(|v| format!("v{v}")).collect()
                })
                .collect();
            let k = SimplicialComplex::build(&tops).ok()?;
            common::small_enough(&k).then_some(k)
        })
}

fn strat_for(k: &SimplicialComplex, labels: &[u8]) -> Stratification {
    let mut it = labels.iter().cycle();
    let names: Vec<Vec<String>> = k
        .counts()
        .iter()
        .map(|&c| (0..c).map(|_| format!("s{}", it.next().unwrap() % 3)).collect())
        .collect();
    Stratification::from_names(k, &names).unwrap()
}

fn bitvec(bits: &[bool]) -> BitVec {
    BitVec::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn boundary_squares_to_zero(k in complex_strategy()) {
        for d in 2..=k.dim() {
            prop_assert!(k.boundary_matrix_unchecked(d - 1).mul(&k.boundary_matrix_unchecked(d)).is_zero());
        }
        let sd = barycentric_subdivision(&k);
        for d in 1..=k.dim() {
            // the subdivision operator is a chain map
            let lhs = sd.complex.boundary_matrix_unchecked(d).mul(&sd.sd[d]);
            let rhs = sd.sd[d - 1].mul(&k.boundary_matrix_unchecked(d));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn engine_agrees_with_enumeration(k in complex_strategy(), labels in prop::collection::vec(any::<u8>(), 1..8), p in prop::collection::vec(0i64..=2, 0..=3)) {
        let s = strat_for(&k, &labels);
        let p = Perversity::from_values(p).unwrap();
        prop_assert_eq!(ih_groups(&k, &s, &p).unwrap().betti(), common::brute_betti(&k, &s, &p, None));
    }

    #[test]
    fn relative_engine_agrees_with_enumeration(k in complex_strategy(), labels in prop::collection::vec(any::<u8>(), 1..8), pick in prop::collection::vec(any::<bool>(), 8)) {
        let s = strat_for(&k, &labels);
        let p = Perversity::zero();
        let faces: Vec<Vec<u32>> = k.simplices(0).iter().zip(pick.iter().cycle()).filter(|(_, &b)| b).map(|(v, _)| v.clone()).collect();
        prop_assume!(!faces.is_empty());
        let l = k.subcomplex(faces);
        let mask = common::mask_of(&k, &l);
        prop_assert_eq!(ih_groups_relative(&k, &l, &s, &p).unwrap().betti(), common::brute_betti(&k, &s, &p, Some(&mask)));
    }

    #[test]
    fn subdivision_keeps_betti_numbers(k in complex_strategy()) {
        let t = Stratification::trivial(&k);
        let sd = barycentric_subdivision(&k);
        let ts = Stratification::trivial(&sd.complex);
        let z = Perversity::zero();
        prop_assert_eq!(ih_groups(&k, &t, &z).unwrap().betti(), ih_groups(&sd.complex, &ts, &z).unwrap().betti());
    }

    #[test]
    fn quotient_dimension_is_rank_difference(cols in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 0..6), mix in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 0..6)) {
        let z: Vec<BitVec> = cols.iter().map(|c| bitvec(c)).collect();
        // boundaries drawn from the span of z
        let b: Vec<BitVec> = mix.iter().map(|m| {
            let mut v = BitVec::zeros(6);
            for (i, zi) in z.iter().enumerate() {
                if m[i % m.len()] {
                    v.xor_assign(zi);
                }
            }
            v
        }).collect();
        let q = quotient_basis(6, &z, &b).unwrap();
        let rz = Gf2Matrix::from_columns(6, z.clone()).rank();
        let rb = Gf2Matrix::from_columns(6, b.clone()).rank();
        prop_assert_eq!(q.dim(), rz - rb);
        for v in &b {
            prop_assert!(q.coordinates(v).unwrap().is_zero());
        }
    }

    #[test]
    fn dualizing_random_exact_sequences(rank_a in 0usize..3, rank_b in 0usize..3, extra in 0usize..3) {
        // 0 -> A -> B -> C -> 0 split exact, with B = A ⊕ C'
        let a = rank_a;
        let c = rank_b + extra;
        let b = a + c;
        let inc = Gf2Matrix::from_columns(b, (0..a).map(|i| BitVec::unit(b, i)).collect());
        let proj = Gf2Matrix::from_columns(c, (0..b).map(|i| if i < a { BitVec::zeros(c) } else { BitVec::unit(c, i - a) }).collect());
        let sp = |dim| Space { label: format!("V{dim}"), kind: SpaceKind::Other, degree: 0, dim, dual: false };
        let seq = ExactSequence::new(
            vec![sp(0), sp(a), sp(b), sp(c), sp(0)],
            vec![Gf2Matrix::zeros(a, 0), inc, proj, Gf2Matrix::zeros(0, c)],
        ).unwrap();
        prop_assert!(check_exact(&seq).exact);
        prop_assert!(check_exact(&dualize(&seq)).exact);
        prop_assert_eq!(dualize(&dualize(&seq)), seq);
    }
}

#[test]
fn sheet_boundaries_square_to_zero_on_bundled_models() {
    for name in models::all_names() {
        let m = models::model(&name).unwrap();
        let sc = SheetComplex::new(&m.complex, m.boundary.as_ref().map(|b| m.complex.subcomplex_mask(b).unwrap()).as_deref()).unwrap();
        for j in 2..=sc.dim {
            assert!(sc.differential[j - 1].mul(&sc.differential[j]).is_zero(), "{name}, degree {j}");
        }
    }
}

#[test]
fn intersection_chains_closed_under_addition() {
    use rand::{Rng, SeedableRng};
    let z = Perversity::zero();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for name in ["pinched_rp2", "pinched_torus", "nodal_sphere", "cone_of:pinched_rp2"] {
        let m = models::model(name).unwrap();
        let ac = allowable_complex(&m.complex, &m.strat, &z).unwrap();
        for _ in 0..1000 {
            let d = rng.gen_range(0..=m.complex.dim());
            let mut v = BitVec::zeros(m.complex.count(d));
            for b in &ac.basis[d] {
                if rng.gen::<bool>() {
                    v.xor_assign(&b.coeffs);
                }
            }
            assert!(is_intersection_chain(&m.complex, &m.strat, &z, &Chain::new(&m.complex, d, v).unwrap()), "{name}");
        }
    }
}

#[test]
fn pairing_independent_of_seed_on_closed_models() {
    let z = Perversity::zero();
    for name in models::all_names() {
        let m = models::model(&name).unwrap();
        if m.kind != ModelKind::Closed {
            continue;
        }
        let pres = Presentations::closed(&m.complex, &m.strat, &z).unwrap();
        for i in 0..=m.complex.dim() {
            let a = pres.pairing(i, 1, 20).unwrap();
            let b = pres.pairing(i, 2, 20).unwrap();
            assert_eq!(a.matrix, b.matrix, "{name}, degree {i}");
            assert_eq!(a.trials_passed, 20);
        }
    }
}

#[test]
fn pairing_is_symmetric_on_closed_models() {
    let z = Perversity::zero();
    for name in ["torus", "klein_bottle", "rp2", "pinched_rp2", "sphere3", "suspension_of:torus"] {
        let m = models::model(name).unwrap();
        let n = m.complex.dim();
        let pres = Presentations::closed(&m.complex, &m.strat, &z).unwrap();
        for i in 0..=n {
            let p = pres.pairing(i, 3, 5).unwrap();
            let q = pres.pairing(n - i, 3, 5).unwrap();
            assert_eq!(p.matrix, q.matrix.transpose(), "{name}, degree {i}");
        }
    }
}

#[test]
fn marked_point_choice_does_not_change_ih() {
    let k = models::pinched_rp2_complex().unwrap();
    let z = Perversity::zero();
    let first = models::pinched_rp2_stratification(&k, 0).unwrap();
    let second = models::pinched_rp2_stratification(&k, 1).unwrap();
    assert_ne!(first, second);
    assert_eq!(first.strata().len(), 3);
    assert_eq!(second.strata().len(), 3);
    assert_eq!(ih_groups(&k, &first, &z).unwrap().betti(), vec![1, 1, 1]);
    assert_eq!(ih_groups(&k, &second, &z).unwrap().betti(), vec![1, 1, 1]);
}
