//! Stratifications of simplicial complexes and allowability of chains.
//!
//! A stratification assigns every (open) simplex to a named stratum. Stratum
//! dimensions are always recomputed from the simplices they contain.

use std::collections::BTreeMap;

use crate::complex::{is_subset, Chain, Simplex, SimplicialComplex, Subdivision, VertexId};
use crate::error::{Error, Result};
use crate::gf2::BitVec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub name: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    ambient_dim: usize,
    strata: Vec<Stratum>,
    /// `assignment[d][i]`: stratum index of the `i`-th `d`-simplex.
    assignment: Vec<Vec<usize>>,
}

impl Stratification {
    /// One stratum containing everything.
    pub fn trivial(k: &SimplicialComplex) -> Self {
        let assignment = k.counts().iter().map(|&c| vec![0; c]).collect();
        Self { ambient_dim: k.dim(), strata: vec![Stratum { name: "main".into(), dim: k.dim() }], assignment }
    }

    /// Builds a stratification from per-simplex stratum names.
    /// Stratum dimensions are derived; names appear in order of first use.
    pub fn from_names(k: &SimplicialComplex, names: &[Vec<String>]) -> Result<Self> {
        if names.len() != k.counts().len() || names.iter().zip(k.counts()).any(|(n, c)| n.len() != c) {
            return Err(Error::InvalidStratification("assignment does not cover every simplex".into()));
        }
        let mut order: Vec<String> = Vec::new();
        let mut lookup: BTreeMap<String, usize> = BTreeMap::new();
        let assignment = names
            .iter()
            .map(|row| {
                row.iter()
                    .map(|n| {
                        *lookup.entry(n.clone()).or_insert_with(|| {
                            order.push(n.clone());
                            order.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let mut s = Self {
            ambient_dim: k.dim(),
            strata: order.into_iter().map(|name| Stratum { name, dim: 0 }).collect(),
            assignment,
        };
        s.recompute_dims();
        Ok(s)
    }

    fn recompute_dims(&mut self) {
        let mut dims = vec![None::<usize>; self.strata.len()];
        for (d, row) in self.assignment.iter().enumerate() {
            for &s in row {
                dims[s] = Some(dims[s].map_or(d, |x: usize| x.max(d)));
            }
        }
        // drop strata that no longer contain anything
        let keep: Vec<usize> = (0..self.strata.len()).filter(|&i| dims[i].is_some()).collect();
        let mut remap = vec![usize::MAX; self.strata.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        self.strata = keep.iter().map(|&i| Stratum { name: self.strata[i].name.clone(), dim: dims[i].unwrap() }).collect();
        for row in &mut self.assignment {
            for s in row.iter_mut() {
                *s = remap[*s];
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn stratum_of(&self, d: usize, i: usize) -> usize {
        self.assignment[d][i]
    }

    pub fn stratum_index(&self, name: &str) -> Option<usize> {
        self.strata.iter().position(|s| s.name == name)
    }

    pub fn codim(&self, stratum: usize) -> usize {
        self.ambient_dim - self.strata[stratum].dim
    }

    /// Simplices of a stratum, as (dimension, index) pairs.
    pub fn members(&self, stratum: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (d, row) in self.assignment.iter().enumerate() {
            for (i, &s) in row.iter().enumerate() {
                if s == stratum {
                    out.push((d, i));
                }
            }
        }
        out
    }

    pub fn has_codim_one(&self) -> bool {
        (0..self.strata.len()).any(|s| self.codim(s) == 1)
    }

    /// Frontier check: faces of a stratum's simplices should lie in strata of
    /// lower or equal dimension. Returns one warning per offending stratum pair.
    pub fn frontier_warnings(&self, k: &SimplicialComplex) -> Vec<String> {
        let mut seen = std::collections::BTreeSet::new();
        for d in 0..=k.dim() {
            for (i, s) in k.simplices(d).iter().enumerate() {
                let outer = self.assignment[d][i];
                for_each_face(s, |f| {
                    let fd = f.len() - 1;
                    let inner = self.assignment[fd][k.index_of(f).unwrap()];
                    if self.strata[inner].dim > self.strata[outer].dim {
                        seen.insert((outer, inner));
                    }
                });
            }
        }
        seen.into_iter()
            .map(|(a, b)| {
                format!(
                    "closure of stratum `{}` meets higher-dimensional stratum `{}`",
                    self.strata[a].name, self.strata[b].name
                )
            })
            .collect()
    }

    /// Restriction to a subcomplex, matched by vertex names.
    pub fn restrict(&self, k: &SimplicialComplex, sub: &SimplicialComplex) -> Result<Stratification> {
        let emb = k.embedding_of(sub)?;
        let names = emb
            .iter()
            .enumerate()
            .map(|(d, row)| row.iter().map(|&i| self.strata[self.assignment[d][i]].name.clone()).collect())
            .collect::<Vec<Vec<String>>>();
        Stratification::from_names(sub, &names)
    }

    /// Stratification of K' where each simplex inherits the stratum of its carrier.
    pub fn induced_on_subdivision(&self, sub: &Subdivision) -> Stratification {
        let kp = &sub.complex;
        let assignment = (0..=kp.dim())
            .map(|d| {
                kp.simplices(d)
                    .iter()
                    .map(|s| {
                        let (cd, ci) = sub.carrier(s);
                        self.assignment[cd][ci]
                    })
                    .collect()
            })
            .collect();
        let mut s = Stratification { ambient_dim: kp.dim(), strata: self.strata.clone(), assignment };
        s.recompute_dims();
        s
    }

    pub fn stratum_names(&self) -> Vec<Vec<String>> {
        self.assignment.iter().map(|row| row.iter().map(|&s| self.strata[s].name.clone()).collect()).collect()
    }
}

/// Calls `f` on every nonempty face of `s`, including `s`.
pub(crate) fn for_each_face(s: &[VertexId], mut f: impl FnMut(&[VertexId])) {
    let k = s.len();
    let mut buf = Vec::with_capacity(k);
    for mask in 1u32..(1 << k) {
        buf.clear();
        buf.extend((0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]));
        f(&buf);
    }
}

/// Cone on a stratified complex: the apex is a point stratum and each stratum S
/// of K becomes the half-open cone c(S), of the same codimension.
pub fn cone(k: &SimplicialComplex, strat: &Stratification) -> (SimplicialComplex, Stratification, VertexId) {
    let (ck, apex) = k.cone("apex");
    let apex_name = unique_name(strat, "apex");
    let names: Vec<Vec<String>> = (0..=ck.dim())
        .map(|d| {
            ck.simplices(d)
                .iter()
                .map(|s| {
                    if s == &vec![apex] {
                        return apex_name.clone();
                    }
                    let base: Simplex = s.iter().copied().filter(|&v| v != apex).collect();
                    let i = k.index_of(&base).expect("cone base simplex");
                    format!("c({})", strat.strata[strat.assignment[base.len() - 1][i]].name)
                })
                .collect()
        })
        .collect();
    let cs = Stratification::from_names(&ck, &names).expect("cone assignment covers every simplex");
    (ck, cs, apex)
}

/// Suspension of a stratified complex, both apexes being point strata.
pub fn suspension(k: &SimplicialComplex, strat: &Stratification) -> (SimplicialComplex, Stratification) {
    let (sk, north, south) = k.suspension();
    let n_name = unique_name(strat, "north");
    let s_name = unique_name(strat, "south");
    let names: Vec<Vec<String>> = (0..=sk.dim())
        .map(|d| {
            sk.simplices(d)
                .iter()
                .map(|s| {
                    if s == &vec![north] {
                        return n_name.clone();
                    }
                    if s == &vec![south] {
                        return s_name.clone();
                    }
                    let base: Simplex = s.iter().copied().filter(|&v| v != north && v != south).collect();
                    let i = k.index_of(&base).expect("suspension base simplex");
                    format!("s({})", strat.strata[strat.assignment[base.len() - 1][i]].name)
                })
                .collect()
        })
        .collect();
    (sk.clone(), Stratification::from_names(&sk, &names).expect("suspension assignment"))
}

fn unique_name(strat: &Stratification, base: &str) -> String {
    let mut name = base.to_string();
    while strat.stratum_index(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Carves the vertex `v` out of its stratum as a new point stratum.
pub fn mark_point(k: &SimplicialComplex, strat: &Stratification, v: VertexId) -> Result<Stratification> {
    let i = k.index_of(&[v]).ok_or_else(|| Error::UnknownVertex(format!("#{v}")))?;
    let current = strat.assignment[0][i];
    if strat.strata[current].dim == 0 {
        return Err(Error::AlreadyPointStratum(k.name(v).to_string()));
    }
    let mut out = strat.clone();
    let name = unique_name(strat, &format!("pt({})", k.name(v)));
    out.strata.push(Stratum { name, dim: 0 });
    out.assignment[0][i] = out.strata.len() - 1;
    out.recompute_dims();
    Ok(out)
}

/// A perversity: the allowed excess p(c) at codimension c. Values past the end
/// of the list repeat the last one; the empty list is the zero perversity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Perversity {
    values: Vec<i64>,
}

impl Perversity {
    pub fn zero() -> Self {
        Self { values: Vec::new() }
    }

    /// `values[c - 1] = p(c)`.
    pub fn from_values(values: Vec<i64>) -> Result<Self> {
        if values.iter().any(|&v| v < 0) {
            return Err(Error::InvalidPerversity("values must be non-negative".into()));
        }
        Ok(Self { values })
    }

    /// Additionally requires p(c+1) - p(c) ∈ {0, 1}.
    pub fn classical(values: Vec<i64>) -> Result<Self> {
        if values.windows(2).any(|w| !(0..=1).contains(&(w[1] - w[0]))) {
            return Err(Error::InvalidPerversity("p(c+1) - p(c) must be 0 or 1".into()));
        }
        Self::from_values(values)
    }

    pub fn value(&self, codim: usize) -> i64 {
        if codim == 0 || self.values.is_empty() {
            return 0;
        }
        self.values[(codim - 1).min(self.values.len() - 1)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn describe(&self) -> String {
        if self.is_zero() {
            "zero".into()
        } else {
            format!("list:{}", self.values.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
        }
    }
}

/// Per-simplex allowability test: for every stratum S of codimension c ≥ 1,
/// the faces of `s` lying in S have dimension at most dim(s) - c + p(c).
pub fn simplex_allowable(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, s: &[VertexId]) -> bool {
    let i = s.len() as i64 - 1;
    let mut ok = true;
    for_each_face(s, |f| {
        let fd = f.len() - 1;
        let st = strat.assignment[fd][k.index_of(f).expect("face closure")];
        let c = strat.codim(st);
        if c >= 1 && fd as i64 > i - c as i64 + p.value(c) {
            ok = false;
        }
    });
    ok
}

/// Indicator of allowable simplices, per degree.
pub fn allowable_masks(k: &SimplicialComplex, strat: &Stratification, p: &Perversity) -> Vec<BitVec> {
    (0..=k.dim())
        .map(|d| {
            BitVec::from_indices(
                k.count(d),
                k.simplices(d).iter().enumerate().filter(|(_, s)| simplex_allowable(k, strat, p, s)).map(|(i, _)| i),
            )
        })
        .collect()
}

pub fn gm_allowable(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, c: &Chain) -> bool {
    c.support(k).all(|s| simplex_allowable(k, strat, p, s))
}

/// `c` and `∂c` are both allowable, i.e. `c` is an intersection chain.
pub fn is_intersection_chain(k: &SimplicialComplex, strat: &Stratification, p: &Perversity, c: &Chain) -> bool {
    gm_allowable(k, strat, p, c) && (c.degree == 0 || gm_allowable(k, strat, p, &c.boundary(k)))
}

/// Recognises combinatorial spheres (and, if `allow_ball`, balls) of dimension
/// `m ≤ 2`. Dimension −1 means the empty complex.
pub fn is_sphere(l: &SimplicialComplex, m: isize, allow_ball: bool) -> Result<bool> {
    if m > 2 {
        return Err(Error::DimensionTooLarge(m as usize + 1));
    }
    if m < 0 {
        return Ok(l.is_empty());
    }
    if l.is_empty() || l.dim() as isize != m || !l.is_pure() {
        return Ok(false);
    }
    let connected = l.components().len() == 1;
    match m {
        0 => Ok(l.count(0) == 2 || (allow_ball && l.count(0) == 1)),
        1 => {
            let degrees: Vec<usize> = (0..l.count(0)).map(|v| l.cofacets_of(0, v).len()).collect();
            if !connected || degrees.iter().any(|&d| d > 2) {
                return Ok(false);
            }
            let ends = degrees.iter().filter(|&&d| d == 1).count();
            Ok(ends == 0 || (allow_ball && ends == 2))
        }
        _ => {
            if !connected {
                return Ok(false);
            }
            let mut boundary_edges = Vec::new();
            for (e, s) in l.simplices(1).iter().enumerate() {
                match l.cofacets_of(1, e).len() {
                    1 => boundary_edges.push(s.clone()),
                    2 => {}
                    _ => return Ok(false),
                }
            }
            for v in 0..l.count(0) {
                let vl = l.link(l.simplex(0, v));
                if !is_sphere(&vl, 1, true)? {
                    return Ok(false);
                }
            }
            let chi = l.euler_characteristic();
            if boundary_edges.is_empty() {
                return Ok(chi == 2);
            }
            if !allow_ball || chi != 1 {
                return Ok(false);
            }
            let b = SimplicialComplex::from_simplices(l.names().to_vec(), boundary_edges);
            let b = b.reindexed(b.simplices(1).to_vec());
            is_sphere(&b, 1, false)
        }
    }
}

/// Iterated combinatorial singular locus, for complexes of dimension ≤ 3.
///
/// At each level, a simplex of the current complex C (of dimension d) is
/// regular when its link in C is a sphere or ball of dimension d − dim σ − 1.
/// Regular simplices are split into connected components, each a stratum; the
/// closure of the non-regular ones is the next C.
pub fn singular_stratification(k: &SimplicialComplex) -> Result<Stratification> {
    if k.dim() > 3 {
        return Err(Error::DimensionTooLarge(k.dim()));
    }
    let mut names: Vec<Vec<Option<String>>> = k.counts().iter().map(|&c| vec![None; c]).collect();
    let mut current: Vec<Simplex> = k.all_simplices().cloned().collect();
    let mut per_dim_counter: BTreeMap<usize, usize> = BTreeMap::new();
    while !current.is_empty() {
        let c = k.subcomplex(current.clone());
        let d = c.dim() as isize;
        let mut singular: Vec<Simplex> = Vec::new();
        let mut regular: Vec<Simplex> = Vec::new();
        for s in c.all_simplices() {
            let lk = c.link(s);
            if is_sphere(&lk, d - s.len() as isize, true)? {
                regular.push(s.clone());
            } else {
                singular.push(s.clone());
            }
        }
        let sigma = if singular.is_empty() { None } else { Some(k.subcomplex(singular)) };
        let regular: Vec<Simplex> = regular.into_iter().filter(|s| sigma.as_ref().is_none_or(|sg| !sg.contains(s))).collect();
        // components of the regular part under the face relation
        let pos: std::collections::HashMap<&Simplex, usize> = regular.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut parent: Vec<usize> = (0..regular.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                p[r] = p[p[r]];
                r = p[r];
            }
            r
        }
        for (i, s) in regular.iter().enumerate() {
            for f in SimplicialComplex::facets(s) {
                if let Some(&j) = pos.get(&f) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..regular.len() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        for members in groups.values() {
            let dim = members.iter().map(|&i| regular[i].len() - 1).max().unwrap();
            let counter = per_dim_counter.entry(dim).or_insert(0);
            let name = format!("s{dim}_{counter}");
            *counter += 1;
            for &i in members {
                let s = &regular[i];
                names[s.len() - 1][k.index_of(s).unwrap()] = Some(name.clone());
            }
        }
        current = sigma.map(|sg| sg.all_simplices().cloned().collect()).unwrap_or_default();
    }
    let names: Vec<Vec<String>> =
        names.into_iter().map(|row| row.into_iter().map(|n| n.expect("every simplex classified")).collect()).collect();
    Stratification::from_names(k, &names)
}

/// Closed set of points of |C| without a Euclidean neighbourhood in |C|,
/// as per-dimension indicators over the simplices of K.
pub fn chain_singular_set(k: &SimplicialComplex, c: &Chain) -> Result<Vec<BitVec>> {
    if c.degree > 3 {
        return Err(Error::DimensionTooLarge(c.degree));
    }
    let support: Vec<Simplex> = c.support(k).cloned().collect();
    let mut out: Vec<BitVec> = k.counts().iter().map(|&n| BitVec::zeros(n)).collect();
    if support.is_empty() || c.degree == 0 {
        return Ok(out);
    }
    let sc = k.subcomplex(support);
    let i = c.degree as isize;
    let mut singular = Vec::new();
    for d in 0..c.degree {
        for s in sc.simplices(d) {
            if !is_sphere(&sc.link(s), i - d as isize - 1, false)? {
                singular.push(s.clone());
            }
        }
    }
    let closed = k.subcomplex(singular);
    for d in 0..=closed.dim() {
        for s in closed.simplices(d) {
            if !closed.is_empty() {
                out[d].set(k.index_of(s).unwrap(), true);
            }
        }
    }
    Ok(out)
}

/// Allowability in the sense of the real regime: the support conditions of
/// the zero perversity, the singular-set condition dim(ΣC ∩ S) ≤ i − 2 on
/// codimension-one strata, and the same for ∂C.
pub fn real_allowable(k: &SimplicialComplex, strat: &Stratification, c: &Chain) -> Result<bool> {
    if c.degree > 3 {
        return Err(Error::DimensionTooLarge(c.degree));
    }
    if !gm_allowable(k, strat, &Perversity::zero(), c) {
        return Ok(false);
    }
    let sigma = chain_singular_set(k, c)?;
    let i = c.degree as i64;
    for (d, mask) in sigma.iter().enumerate() {
        for j in mask.ones() {
            let st = strat.stratum_of(d, j);
            if strat.codim(st) == 1 && d as i64 > i - 2 {
                return Ok(false);
            }
        }
    }
    if c.degree == 0 {
        return Ok(true);
    }
    real_allowable(k, strat, &c.boundary(k))
}

/// Simplices of `k` whose closure meets the given vertices.
pub fn touching(k: &SimplicialComplex, d: usize, vertices: &[VertexId]) -> Vec<usize> {
    k.simplices(d).iter().enumerate().filter(|(_, s)| vertices.iter().any(|v| is_subset(&[*v], s))).map(|(i, _)| i).collect()
}
