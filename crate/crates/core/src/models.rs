//! Bundled triangulated, stratified spaces.

use std::collections::VecDeque;

use crate::complex::{barycentric_subdivision, is_pseudomanifold, SimplicialComplex, VertexId};
use crate::error::{Error, Result, ResultExt};
use crate::strata::{self, mark_point, singular_stratification, Stratification};

/// How a model is meant to be used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Closed pseudomanifold.
    Closed,
    /// A pseudomanifold with boundary, bundled together with its boundary subcomplex.
    Pair,
    /// A pseudomanifold with boundary used on its own.
    WithBoundary,
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// A textbook fact about the space.
    Standard,
    /// A value the counterexample construction is built to exhibit.
    Reference,
    /// Obtained by an independent computation.
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "quantity", content = "value")]
pub enum Quantity {
    Homology(Vec<usize>),
    IntersectionHomology(Vec<usize>),
    RelativeHomology(Vec<usize>),
    Euler(i64),
    IntersectionEuler(i64),
}

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct Expectation {
    #[serde(flatten)]
    pub quantity: Quantity,
    pub origin: Origin,
}

#[derive(Clone, Debug)]
pub struct ModelEntry {
    pub name: String,
    pub complex: SimplicialComplex,
    pub strat: Stratification,
    pub kind: ModelKind,
    /// Boundary subcomplex, for pairs.
    pub boundary: Option<SimplicialComplex>,
    pub note: String,
    pub expected: Vec<Expectation>,
}

pub const CATALOGUE: &[&str] = &[
    "sphere1",
    "sphere2",
    "sphere3",
    "torus",
    "rp2",
    "klein_bottle",
    "disk_pair",
    "solid_torus_pair",
    "nodal_sphere",
    "pinched_torus",
    "pinched_rp2",
];

/// Models that are closed pseudomanifolds, also the bases accepted by `cone_of:` and `suspension_of:`.
pub fn closed_models() -> Vec<&'static str> {
    CATALOGUE.iter().copied().filter(|n| !n.ends_with("_pair")).collect()
}

fn numbered(list: &[[usize; 3]]) -> SimplicialComplex {
    let t: Vec<Vec<String>> = list.iter().map(|s| s.iter().map(|v| v.to_string()).collect()).collect();
    SimplicialComplex::build(&t).expect("bundled triangulation is simplicial")
}

/// Boundary of the (n+1)-simplex on vertices 0..=n+1.
pub fn sphere(n: usize) -> SimplicialComplex {
    let verts: Vec<String> = (0..n + 2).map(|v| v.to_string()).collect();
    let t: Vec<Vec<String>> = (0..n + 2)
        .map(|skip| verts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v.clone()).collect())
        .collect();
    SimplicialComplex::build(&t).expect("simplex boundary")
}

/// The 7-vertex torus.
pub fn torus_complex() -> SimplicialComplex {
    let mut t = Vec::new();
    for i in 0..7 {
        t.push([i, (i + 1) % 7, (i + 3) % 7]);
        t.push([i, (i + 2) % 7, (i + 3) % 7]);
    }
    numbered(&t)
}

/// The 6-vertex projective plane.
pub fn rp2_complex() -> SimplicialComplex {
    numbered(&[
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 5, 1],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 1],
        [4, 5, 2],
        [5, 1, 3],
    ])
}

/// Klein bottle from a square grid with one twisted identification.
pub fn klein_bottle_complex() -> SimplicialComplex {
    let m = 4;
    let v = |r: usize, c: usize| -> usize {
        let (r, c) = if r == m { (0, (m - c % m) % m) } else { (r, c % m) };
        r * m + c
    };
    let mut t = Vec::new();
    for r in 0..m {
        for c in 0..m {
            t.push([v(r, c), v(r + 1, c), v(r + 1, c + 1)]);
            t.push([v(r, c), v(r, c + 1), v(r + 1, c + 1)]);
        }
    }
    numbered(&t)
}

/// Solid torus: a cyclic stack of triangular prisms, each cut into three tetrahedra.
pub fn solid_torus_complex() -> SimplicialComplex {
    let m = 4;
    let name = |l: &str, k: usize| format!("{l}{}", k % m);
    let mut t = Vec::new();
    for k in 0..m {
        let (a0, b0, c0) = (name("a", k), name("b", k), name("c", k));
        let (a1, b1, c1) = (name("a", k + 1), name("b", k + 1), name("c", k + 1));
        t.push(vec![a0.clone(), b0.clone(), c0.clone(), a1.clone()]);
        t.push(vec![b0, c0.clone(), a1.clone(), b1.clone()]);
        t.push(vec![c0, a1, b1, c1]);
    }
    SimplicialComplex::build(&t).expect("solid torus is simplicial")
}

/// Subcomplex spanned by the codimension-one faces with a single cofacet.
pub fn boundary_complex(k: &SimplicialComplex) -> SimplicialComplex {
    k.subcomplex(is_pseudomanifold(k).boundary_faces)
}

/// A cylinder whose two boundary circles are coned off to one common point.
pub fn pinched_torus_complex() -> SimplicialComplex {
    let m = 4;
    let mut t: Vec<Vec<String>> = Vec::new();
    for k in 0..m {
        let a = |j: usize| format!("a{}", j % m);
        let b = |j: usize| format!("b{}", j % m);
        t.push(vec![a(k), a(k + 1), b(k)]);
        t.push(vec![a(k + 1), b(k + 1), b(k)]);
        t.push(vec!["p".into(), a(k), a(k + 1)]);
        t.push(vec!["p".into(), b(k), b(k + 1)]);
    }
    SimplicialComplex::build(&t).expect("pinched torus is simplicial")
}

/// S² with two points identified: the barycentres of two disjoint edges of the
/// subdivided tetrahedron boundary are glued.
pub fn nodal_sphere_complex() -> Result<SimplicialComplex> {
    glue_edge_barycentres(&sphere(2), ["0", "1"], ["2", "3"])
}

/// The projective plane with two points identified. The 6-vertex projective plane is
/// subdivided once and the barycentres of the disjoint edges {0,1} and {2,3} are glued;
/// any two of its original vertices are adjacent, so they cannot be glued directly.
pub fn pinched_rp2_complex() -> Result<SimplicialComplex> {
    glue_edge_barycentres(&rp2_complex(), ["0", "1"], ["2", "3"])
}

fn glue_edge_barycentres(k: &SimplicialComplex, e0: [&str; 2], e1: [&str; 2]) -> Result<SimplicialComplex> {
    let sd = barycentric_subdivision(k);
    let bary = |e: [&str; 2]| -> Result<VertexId> {
        let s = k.simplex_by_names(&e)?;
        let i = k.index_of(&s).ok_or_else(|| Error::UnknownVertex(e.join(" ")))?;
        Ok(sd.barycentre(1, i))
    };
    sd.complex.identify_vertices(bary(e0)?, bary(e1)?)
}

/// Edge distances from `v` in the 1-skeleton.
fn distances(k: &SimplicialComplex, v: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; k.vertex_count()];
    dist[v as usize] = Some(0);
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].expect("visited");
        for w in k.neighbours(u) {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Vertices of the top stratum at maximal edge distance from `x0`, sorted by name.
/// The first is the marked point; the rest serve as alternative choices.
pub fn marked_point_candidates(k: &SimplicialComplex, strat: &Stratification, x0: VertexId) -> Vec<VertexId> {
    let dist = distances(k, x0);
    let top = |v: VertexId| {
        let i = k.index_of(&[v]).expect("vertex");
        strat.codim(strat.stratum_of(0, i)) == 0
    };
    let eligible: Vec<VertexId> = (0..k.vertex_count() as VertexId).filter(|&v| v != x0 && top(v)).collect();
    let far = eligible.iter().filter_map(|&v| dist[v as usize]).max().unwrap_or(0);
    let mut out: Vec<VertexId> = eligible.into_iter().filter(|&v| dist[v as usize] == Some(far)).collect();
    out.sort_by(|&a, &b| k.name(a).cmp(k.name(b)));
    out
}

/// The singular point of a model whose singular locus is a single vertex.
pub fn pinch_vertex(k: &SimplicialComplex, strat: &Stratification) -> Option<VertexId> {
    let points: Vec<usize> = (0..strat.strata().len()).filter(|&s| strat.strata()[s].dim == 0).collect();
    let &[s] = points.as_slice() else { return None };
    let members = strat.members(s);
    match members.as_slice() {
        [(0, i)] => Some(k.simplex(0, *i)[0]),
        _ => None,
    }
}

/// The three-stratum stratification of the pinched projective plane, marking the `choice`-th candidate.
pub fn pinched_rp2_stratification(k: &SimplicialComplex, choice: usize) -> Result<Stratification> {
    let sing = singular_stratification(k)?;
    let x0 = pinch_vertex(k, &sing).ok_or_else(|| Error::Inconsistent("pinched model has no single pinch vertex".into()))?;
    let candidates = marked_point_candidates(k, &sing, x0);
    let x1 = *candidates
        .get(choice)
        .ok_or_else(|| Error::Inconsistent(format!("no marked-point candidate #{choice}")))?;
    mark_point(k, &sing, x1)
}

fn expect(quantity: Quantity, origin: Origin) -> Expectation {
    Expectation { quantity, origin }
}

pub fn model(name: &str) -> Result<ModelEntry> {
    build(name).context(format!("model `{name}`"))
}

fn build(name: &str) -> Result<ModelEntry> {
    use Origin::*;
    use Quantity::*;
    if let Some(base) = name.strip_prefix("cone_of:") {
        let b = model(base)?;
        if b.kind != ModelKind::Closed {
            return Err(Error::UnknownModel(name.to_string()));
        }
        let (ck, cs, _) = strata::cone(&b.complex, &b.strat);
        let mut expected = vec![expect(Euler(1), Standard)];
        let n = b.complex.dim();
        if let Some(Homology(h)) = b.expected.iter().map(|e| &e.quantity).find(|q| matches!(q, Homology(_))) {
            let mut rel = vec![0];
            rel.extend(h.iter().enumerate().map(|(i, &x)| x - usize::from(i == 0)));
            expected.push(expect(RelativeHomology(rel), Standard));
        }
        let mut h = vec![0; n + 2];
        h[0] = 1;
        expected.push(expect(Homology(h), Standard));
        return Ok(ModelEntry {
            name: name.to_string(),
            boundary: Some(b.complex.clone()),
            complex: ck,
            strat: cs,
            kind: ModelKind::Pair,
            note: format!("closed cone on {base}, paired with its base"),
            expected,
        });
    }
    if let Some(base) = name.strip_prefix("suspension_of:") {
        let b = model(base)?;
        if b.kind != ModelKind::Closed {
            return Err(Error::UnknownModel(name.to_string()));
        }
        let (sk, ss) = strata::suspension(&b.complex, &b.strat);
        let mut expected = Vec::new();
        if let Some(Homology(h)) = b.expected.iter().map(|e| &e.quantity).find(|q| matches!(q, Homology(_))) {
            // reduced homology shifts up by one
            let mut s = vec![1];
            s.extend(h.iter().enumerate().map(|(i, &x)| x - usize::from(i == 0)));
            expected.push(expect(Homology(s), Standard));
        }
        return Ok(ModelEntry {
            name: name.to_string(),
            complex: sk,
            strat: ss,
            kind: ModelKind::Closed,
            boundary: None,
            note: format!("suspension of {base}"),
            expected,
        });
    }
    let closed = |name: &str, k: SimplicialComplex, strat: Stratification, note: &str, expected: Vec<Expectation>| ModelEntry {
        name: name.to_string(),
        complex: k,
        strat,
        kind: ModelKind::Closed,
        boundary: None,
        note: note.to_string(),
        expected,
    };
    let entry = match name {
        "sphere1" | "sphere2" | "sphere3" => {
            let n: usize = name[6..].parse().expect("digit");
            let k = sphere(n);
            let mut h = vec![0; n + 1];
            h[0] = 1;
            h[n] = 1;
            let chi = if n.is_multiple_of(2) { 2 } else { 0 };
            let s = Stratification::trivial(&k);
            closed(name, k, s, "boundary of a simplex", vec![expect(Homology(h), Standard), expect(Euler(chi), Standard)])
        }
        "torus" => {
            let k = torus_complex();
            let s = Stratification::trivial(&k);
            closed(name, k, s, "7-vertex torus", vec![
                expect(Homology(vec![1, 2, 1]), Standard),
                expect(IntersectionHomology(vec![1, 2, 1]), Standard),
                expect(Euler(0), Standard),
            ])
        }
        "rp2" => {
            let k = rp2_complex();
            let s = Stratification::trivial(&k);
            closed(name, k, s, "6-vertex projective plane", vec![
                expect(Homology(vec![1, 1, 1]), Standard),
                expect(Euler(1), Standard),
            ])
        }
        "klein_bottle" => {
            let k = klein_bottle_complex();
            let s = Stratification::trivial(&k);
            closed(name, k, s, "Klein bottle from a twisted 4x4 grid", vec![
                expect(Homology(vec![1, 2, 1]), Standard),
                expect(Euler(0), Standard),
            ])
        }
        "nodal_sphere" => {
            let k = nodal_sphere_complex()?;
            let s = singular_stratification(&k)?;
            closed(name, k, s, "sphere with two points identified", vec![
                expect(Euler(1), Derived),
                expect(Homology(vec![1, 1, 1]), Standard),
                expect(IntersectionHomology(vec![1, 0, 1]), Derived),
            ])
        }
        "pinched_torus" => {
            let k = pinched_torus_complex();
            let s = singular_stratification(&k)?;
            closed(name, k, s, "torus with a meridian collapsed to a point", vec![
                expect(Euler(1), Standard),
                expect(Homology(vec![1, 1, 1]), Standard),
                expect(IntersectionHomology(vec![1, 0, 1]), Derived),
            ])
        }
        "pinched_rp2" => {
            let k = pinched_rp2_complex()?;
            let s = pinched_rp2_stratification(&k, 0)?;
            closed(name, k, s, "projective plane with two points identified, pinch point plus one marked point", vec![
                expect(Homology(vec![1, 2, 1]), Reference),
                expect(IntersectionHomology(vec![1, 1, 1]), Reference),
                expect(Euler(0), Reference),
                expect(IntersectionEuler(1), Reference),
            ])
        }
        "disk_pair" => {
            let circle = sphere(1);
            let (disk, _) = circle.cone("c");
            let s = Stratification::trivial(&disk);
            ModelEntry {
                name: name.into(),
                complex: disk,
                strat: s,
                kind: ModelKind::Pair,
                boundary: Some(circle),
                note: "cone on a triangle boundary, paired with the circle".into(),
                expected: vec![
                    expect(Homology(vec![1, 0, 0]), Standard),
                    expect(RelativeHomology(vec![0, 0, 1]), Standard),
                ],
            }
        }
        "solid_torus_pair" => {
            let k = solid_torus_complex();
            let b = boundary_complex(&k);
            let s = Stratification::trivial(&k);
            ModelEntry {
                name: name.into(),
                complex: k,
                strat: s,
                kind: ModelKind::Pair,
                boundary: Some(b),
                note: "solid torus as four prisms, paired with its boundary torus".into(),
                expected: vec![
                    expect(Homology(vec![1, 1, 0, 0]), Derived),
                    expect(RelativeHomology(vec![0, 0, 1, 1]), Derived),
                ],
            }
        }
        _ => return Err(Error::UnknownModel(name.to_string())),
    };
    Ok(entry)
}

/// All catalogue names, plus the cones and suspensions of the closed models of dimension ≤ 2.
pub fn all_names() -> Vec<String> {
    let mut out: Vec<String> = CATALOGUE.iter().map(|s| s.to_string()).collect();
    for base in closed_models() {
        if base != "sphere3" {
            out.push(format!("cone_of:{base}"));
            out.push(format!("suspension_of:{base}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::is_pseudomanifold;

    #[test]
    fn counts_of_small_models() {
        assert_eq!(rp2_complex().counts(), vec![6, 15, 10]);
        assert_eq!(torus_complex().counts(), vec![7, 21, 14]);
        assert_eq!(klein_bottle_complex().euler_characteristic(), 0);
        assert_eq!(pinched_torus_complex().euler_characteristic(), 1);
        assert_eq!(sphere(3).counts(), vec![5, 10, 10, 5]);
    }

    #[test]
    fn pinched_rp2_shape() {
        let k = pinched_rp2_complex().unwrap();
        assert_eq!(k.euler_characteristic(), 0);
        let r = is_pseudomanifold(&k);
        assert!(r.is_pseudomanifold() && r.is_closed());
        let s = pinched_rp2_stratification(&k, 0).unwrap();
        assert_eq!(s.strata().len(), 3);
        let x0 = pinch_vertex(&k, &singular_stratification(&k).unwrap()).unwrap();
        let link = k.vertex_link(x0).unwrap();
        assert_eq!(link.components().len(), 2);
        assert_eq!(link.counts(), vec![8, 8]);
    }

    #[test]
    fn every_model_builds_and_is_a_pseudomanifold() {
        for name in all_names() {
            let m = model(&name).unwrap();
            let r = is_pseudomanifold(&m.complex);
            assert!(r.is_pseudomanifold(), "{name}");
            assert_eq!(r.is_closed(), m.kind == ModelKind::Closed, "{name}");
            if let Some(b) = &m.boundary {
                assert!(is_pseudomanifold(b).is_closed(), "{name} boundary");
            }
        }
    }

    #[test]
    fn unknown_model() {
        assert!(matches!(build("nope"), Err(Error::UnknownModel(_))));
        assert!(model("cone_of:disk_pair").is_err());
    }
}
