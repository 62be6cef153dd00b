//! Finite abstract simplicial complexes and the constructions built on them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::gf2::{BitVec, Gf2Matrix};

pub type VertexId = u32;
/// A simplex as a strictly increasing list of vertex ids.
pub type Simplex = Vec<VertexId>;

/// A finite abstract simplicial complex, closed under taking faces.
///
/// Simplices of each dimension are kept in lexicographic order; the position
/// of a simplex in that order is its index in the chain group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    names: Vec<String>,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    up: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Builds the face closure of the given simplices, named by vertex label.
    pub fn build<S: AsRef<str>>(tops: &[Vec<S>]) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut lookup: HashMap<String, VertexId> = HashMap::new();
        let mut simplices = Vec::with_capacity(tops.len());
        for t in tops {
            let mut s: Simplex = Vec::with_capacity(t.len());
            for name in t {
                let name = name.as_ref();
                let id = *lookup.entry(name.to_string()).or_insert_with(|| {
                    names.push(name.to_string());
                    (names.len() - 1) as VertexId
                });
                s.push(id);
            }
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DuplicateVertex(t.iter().map(|n| n.as_ref().to_string()).collect()));
            }
            simplices.push(s);
        }
        Ok(Self::from_simplices(names, simplices))
    }

    /// Builds the closure of `simplices` (each sorted, without repeats) over the given vertex names.
    pub(crate) fn from_simplices(names: Vec<String>, simplices: Vec<Simplex>) -> Self {
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        for s in simplices {
            debug_assert!(s.windows(2).all(|w| w[0] < w[1]));
            let k = s.len();
            if k == 0 {
                continue;
            }
            if by_dim.len() < k {
                by_dim.resize_with(k, BTreeSet::new);
            }
            if by_dim[k - 1].contains(&s) {
                continue;
            }
            for mask in 1u32..(1 << k) {
                let face: Simplex = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                by_dim[face.len() - 1].insert(face);
            }
        }
        let simplices: Vec<Vec<Simplex>> = by_dim.into_iter().map(|set| set.into_iter().collect()).collect();
        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        let mut up: Vec<Vec<Vec<usize>>> = simplices.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for d in 1..simplices.len() {
            for (j, t) in simplices[d].iter().enumerate() {
                for f in Self::facets(t) {
                    up[d - 1][index[d - 1][&f]].push(j);
                }
            }
        }
        for lists in &mut up {
            for l in lists {
                l.sort_unstable();
            }
        }
        Self { names, simplices, index, up }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Dimension of the complex (0 for the empty complex).
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    /// Every simplex, by dimension then index.
    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.simplices.iter().flatten()
    }

    pub fn simplex(&self, d: usize, i: usize) -> &Simplex {
        &self.simplices[d][i]
    }

    pub fn index_of(&self, s: &[VertexId]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[VertexId]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v as usize]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as VertexId)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn simplex_names(&self, s: &[VertexId]) -> Vec<String> {
        s.iter().map(|&v| self.names[v as usize].clone()).collect()
    }

    /// Maps a list of vertex names to a sorted simplex, if every name is known.
    pub fn simplex_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Simplex> {
        let mut s = names.iter().map(|n| self.vertex(n.as_ref())).collect::<Result<Simplex>>()?;
        s.sort_unstable();
        Ok(s)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().enumerate().map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// Simplices not properly contained in another simplex, by dimension then order.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut out = Vec::new();
        for d in 0..self.simplices.len() {
            for (i, s) in self.simplices[d].iter().enumerate() {
                if self.up[d][i].is_empty() {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn is_pure(&self) -> bool {
        let n = self.dim();
        self.maximal_simplices().iter().all(|s| s.len() == n + 1)
    }

    /// Codimension-one faces of a simplex (none for a vertex).
    pub fn facets(s: &[VertexId]) -> impl Iterator<Item = Simplex> + '_ {
        (0..s.len()).filter(move |_| s.len() > 1).map(move |i| {
            let mut f = s.to_vec();
            f.remove(i);
            f
        })
    }

    /// Indices of simplices of dimension dim(s)+1 containing `s`.
    pub fn cofacets(&self, s: &[VertexId]) -> Vec<usize> {
        match self.index_of(s) {
            Some(i) => self.cofacets_of(s.len() - 1, i).to_vec(),
            None => Vec::new(),
        }
    }

    pub fn cofacets_of(&self, d: usize, i: usize) -> &[usize] {
        &self.up[d][i]
    }

    /// Matrix of the boundary map C_d -> C_{d-1}.
    pub fn boundary_matrix(&self, d: usize) -> Result<Gf2Matrix> {
        if d == 0 || d > self.dim() || self.is_empty() {
            return Err(Error::DegreeOutOfRange { degree: d, dim: self.dim() });
        }
        Ok(self.boundary_matrix_unchecked(d))
    }

    /// As [`boundary_matrix`](Self::boundary_matrix), but returns a matrix with
    /// the right shape (possibly with zero rows or columns) for any degree.
    pub fn boundary_matrix_unchecked(&self, d: usize) -> Gf2Matrix {
        if d == 0 {
            return Gf2Matrix::zeros(0, self.count(0));
        }
        let rows = self.count(d - 1);
        let cols = self
            .simplices(d)
            .iter()
            .map(|s| BitVec::from_indices(rows, Self::facets(s).map(|f| self.index[d - 1][&f])))
            .collect();
        Gf2Matrix::from_columns(rows, cols)
    }

    /// Vertices adjacent to `v` along an edge.
    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self
            .simplices(1)
            .iter()
            .filter_map(|e| match (e[0] == v, e[1] == v) {
                (true, _) => Some(e[1]),
                (_, true) => Some(e[0]),
                _ => None,
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Link of a simplex: simplices disjoint from `s` whose join with `s` is in the complex.
    /// Vertex names are kept; unused vertices are dropped.
    pub fn link(&self, s: &[VertexId]) -> SimplicialComplex {
        let mut tops = Vec::new();
        for d in 0..self.simplices.len() {
            for t in &self.simplices[d] {
                if is_subset(s, t) && t.len() > s.len() {
                    tops.push(t.iter().copied().filter(|v| s.binary_search(v).is_err()).collect::<Simplex>());
                }
            }
        }
        self.reindexed(tops)
    }

    /// Closed star of a simplex: closure of the simplices containing it.
    pub fn star(&self, s: &[VertexId]) -> SimplicialComplex {
        let tops: Vec<Simplex> =
            self.simplices.iter().flatten().filter(|t| is_subset(s, t)).cloned().collect();
        self.reindexed(tops)
    }

    pub fn vertex_link(&self, v: VertexId) -> Result<SimplicialComplex> {
        self.check_vertex(v)?;
        Ok(self.link(&[v]))
    }

    pub fn vertex_star(&self, v: VertexId) -> Result<SimplicialComplex> {
        self.check_vertex(v)?;
        Ok(self.star(&[v]))
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.names.len() && self.contains(&[v]) {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    /// Builds a complex on the vertices used by `simplices`, keeping their names.
    /// Vertex order follows the original ids.
    pub(crate) fn reindexed(&self, simplices: Vec<Simplex>) -> SimplicialComplex {
        let used: BTreeSet<VertexId> = simplices.iter().flatten().copied().collect();
        let remap: HashMap<VertexId, VertexId> = used.iter().enumerate().map(|(i, &v)| (v, i as VertexId)).collect();
        let names = used.iter().map(|&v| self.names[v as usize].clone()).collect();
        let simplices = simplices
            .into_iter()
            .filter(|s| !s.is_empty())
            .map(|s| s.iter().map(|v| remap[v]).collect())
            .collect();
        SimplicialComplex::from_simplices(names, simplices)
    }

    /// Subcomplex spanned by the given simplices (closed under faces), on the same vertex ids.
    pub fn subcomplex(&self, simplices: Vec<Simplex>) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.names.clone(), simplices)
    }

    /// Connected components of the 1-skeleton, as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.names.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                p[r] = p[p[r]];
                r = p[r];
            }
            r
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, e[0] as usize), find(&mut parent, e[1] as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for v in self.simplices(0) {
            let r = find(&mut parent, v[0] as usize);
            groups.entry(r).or_default().push(v[0]);
        }
        groups.into_values().collect()
    }

    /// Cone with a new apex vertex. Returns the cone and the apex id; the
    /// original vertex ids are preserved.
    pub fn cone(&self, apex_name: &str) -> (SimplicialComplex, VertexId) {
        let apex_name = self.fresh_name(apex_name);
        let apex = self.names.len() as VertexId;
        let mut names = self.names.clone();
        names.push(apex_name);
        let mut tops = Vec::new();
        for s in self.maximal_simplices() {
            let mut t = s.clone();
            t.push(apex);
            tops.push(t);
        }
        tops.push(vec![apex]);
        (SimplicialComplex::from_simplices(names, tops), apex)
    }

    /// Suspension with two new apex vertices.
    pub fn suspension(&self) -> (SimplicialComplex, VertexId, VertexId) {
        let north_name = self.fresh_name("north");
        let south_name = self.fresh_name("south");
        let north = self.names.len() as VertexId;
        let south = north + 1;
        let mut names = self.names.clone();
        names.push(north_name);
        names.push(south_name);
        let mut tops = Vec::new();
        for s in self.maximal_simplices() {
            for apex in [north, south] {
                let mut t = s.clone();
                t.push(apex);
                tops.push(t);
            }
        }
        (SimplicialComplex::from_simplices(names, tops), north, south)
    }

    fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_string();
        while self.names.contains(&name) {
            name.push('\'');
        }
        name
    }

    /// Quotient identifying `v1` with `v0`. The merged vertex keeps the name of `v0`.
    pub fn identify_vertices(&self, v0: VertexId, v1: VertexId) -> Result<SimplicialComplex> {
        self.check_vertex(v0)?;
        self.check_vertex(v1)?;
        let (n0, n1) = (self.name(v0).to_string(), self.name(v1).to_string());
        if v0 == v1 {
            return Err(Error::IdentificationBreaksSimpliciality(n0, n1, "vertices coincide".into()));
        }
        if self.contains(&sorted(vec![v0, v1])) {
            return Err(Error::IdentificationBreaksSimpliciality(n0, n1, "vertices are adjacent".into()));
        }
        let l0: BTreeSet<VertexId> = self.vertex_link(v0)?.names().iter().map(|n| self.vertex(n).unwrap()).collect();
        let l1: BTreeSet<VertexId> = self.vertex_link(v1)?.names().iter().map(|n| self.vertex(n).unwrap()).collect();
        if let Some(w) = l0.intersection(&l1).next() {
            return Err(Error::IdentificationBreaksSimpliciality(
                n0,
                n1,
                format!("common link vertex `{}` would create duplicate simplices", self.name(*w)),
            ));
        }
        let remap = |v: VertexId| -> VertexId {
            let v = if v == v1 { v0 } else { v };
            if v > v1 { v - 1 } else { v }
        };
        let mut names = self.names.clone();
        names.remove(v1 as usize);
        let simplices: Vec<Simplex> =
            self.simplices.iter().flatten().map(|s| sorted(s.iter().map(|&v| remap(v)).collect())).collect();
        let out = SimplicialComplex::from_simplices(names, simplices);
        let before: usize = self.counts().iter().sum();
        let after: usize = out.counts().iter().sum();
        if after + 1 != before {
            return Err(Error::Inconsistent(format!("identification changed simplex count {before} -> {after}")));
        }
        Ok(out)
    }

    /// Checks that every simplex of `sub` (matched by vertex names) is in `self`,
    /// returning the index of each `sub` simplex in `self`, per dimension.
    pub fn embedding_of(&self, sub: &SimplicialComplex) -> Result<Vec<Vec<usize>>> {
        let ids: Vec<VertexId> = sub.names.iter().map(|n| self.vertex(n)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for d in 0..sub.simplices.len() {
            let mut row = Vec::with_capacity(sub.count(d));
            for s in &sub.simplices[d] {
                let t = sorted(s.iter().map(|&v| ids[v as usize]).collect());
                let i = self
                    .index_of(&t)
                    .ok_or_else(|| Error::NotSubcomplex(format!("simplex {:?} missing", sub.simplex_names(s))))?;
                row.push(i);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Indicator, per dimension, of simplices of `self` that belong to `sub`.
    pub fn subcomplex_mask(&self, sub: &SimplicialComplex) -> Result<Vec<BitVec>> {
        let emb = self.embedding_of(sub)?;
        Ok((0..=self.dim())
            .map(|d| BitVec::from_indices(self.count(d), emb.get(d).into_iter().flatten().copied()))
            .collect())
    }
}

pub(crate) fn sorted(mut s: Simplex) -> Simplex {
    s.sort_unstable();
    s
}

/// `a ⊆ b` for sorted simplices.
pub(crate) fn is_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// A GF(2) chain on the simplices of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub degree: usize,
    pub coeffs: BitVec,
}

impl Chain {
    pub fn zero(k: &SimplicialComplex, degree: usize) -> Self {
        Self { degree, coeffs: BitVec::zeros(k.count(degree)) }
    }

    pub fn new(k: &SimplicialComplex, degree: usize, coeffs: BitVec) -> Result<Self> {
        if coeffs.len() != k.count(degree) {
            return Err(Error::ChainLength { expected: k.count(degree), got: coeffs.len() });
        }
        Ok(Self { degree, coeffs })
    }

    /// Chain given by a list of named simplices of equal dimension.
    pub fn from_named<S: AsRef<str>>(k: &SimplicialComplex, simplices: &[Vec<S>]) -> Result<Self> {
        let degree = simplices.first().map_or(0, |s| s.len().saturating_sub(1));
        let mut c = Self::zero(k, degree);
        for s in simplices {
            let t = k.simplex_by_names(s)?;
            if t.len() != degree + 1 {
                return Err(Error::ChainLength { expected: degree + 1, got: t.len() });
            }
            let i = k.index_of(&t).ok_or_else(|| Error::NotSubcomplex(format!("{:?}", k.simplex_names(&t))))?;
            c.coeffs.flip(i);
        }
        Ok(c)
    }

    pub fn support<'a>(&'a self, k: &'a SimplicialComplex) -> impl Iterator<Item = &'a Simplex> + 'a {
        self.coeffs.ones().map(move |i| k.simplex(self.degree, i))
    }

    pub fn boundary(&self, k: &SimplicialComplex) -> Chain {
        if self.degree == 0 {
            return Chain { degree: 0, coeffs: BitVec::zeros(0) };
        }
        let mut out = BitVec::zeros(k.count(self.degree - 1));
        for s in self.support(k) {
            for f in SimplicialComplex::facets(s) {
                out.flip(k.index_of(&f).expect("face closure"));
            }
        }
        Chain { degree: self.degree - 1, coeffs: out }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn is_cycle(&self, k: &SimplicialComplex) -> bool {
        self.boundary(k).is_zero()
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.degree, other.degree);
        let mut coeffs = self.coeffs.clone();
        coeffs.xor_assign(&other.coeffs);
        Chain { degree: self.degree, coeffs }
    }
}

/// Verdict of the pseudomanifold check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudomanifoldReport {
    pub pure: bool,
    pub dim: usize,
    /// (n-1)-simplices with exactly one cofacet.
    pub boundary_faces: Vec<Simplex>,
    /// (n-1)-simplices with more than two cofacets.
    pub branching_faces: Vec<Simplex>,
}

impl PseudomanifoldReport {
    pub fn is_pseudomanifold(&self) -> bool {
        self.pure && self.branching_faces.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.is_pseudomanifold() && self.boundary_faces.is_empty()
    }
}

pub fn is_pseudomanifold(k: &SimplicialComplex) -> PseudomanifoldReport {
    let n = k.dim();
    let pure = !k.is_empty() && k.is_pure();
    let mut boundary_faces = Vec::new();
    let mut branching_faces = Vec::new();
    if n >= 1 {
        for f in k.simplices(n - 1) {
            match k.cofacets(f).len() {
                1 => boundary_faces.push(f.clone()),
                2 => {}
                _ => branching_faces.push(f.clone()),
            }
        }
    }
    PseudomanifoldReport { pure, dim: n, boundary_faces, branching_faces }
}

/// Sum of all top simplices. Refuses non-pure complexes.
pub fn fundamental_class(k: &SimplicialComplex) -> Result<Chain> {
    if k.is_empty() || !k.is_pure() {
        return Err(Error::NotPure);
    }
    let n = k.dim();
    Ok(Chain { degree: n, coeffs: BitVec::from_indices(k.count(n), 0..k.count(n)) })
}

/// Barycentric subdivision together with the chain-level subdivision map and carriers.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    /// `sd[i]`: C_i(K) -> C_i(K').
    pub sd: Vec<Gf2Matrix>,
    /// For each vertex of K', the (dimension, index) of the simplex of K it is the barycentre of.
    pub barycentre_of: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl Subdivision {
    /// Vertex of K' at the barycentre of the `i`-th `d`-simplex of K.
    pub fn barycentre(&self, d: usize, i: usize) -> VertexId {
        (self.offsets[d] + i) as VertexId
    }

    /// Smallest simplex of K containing the given simplex of K' (its last flag element).
    pub fn carrier(&self, s: &[VertexId]) -> (usize, usize) {
        self.barycentre_of[*s.last().expect("nonempty simplex") as usize]
    }

    /// The simplex of K at which the flag starts.
    pub fn leader(&self, s: &[VertexId]) -> (usize, usize) {
        self.barycentre_of[s[0] as usize]
    }

    pub fn apply(&self, c: &Chain) -> Chain {
        Chain { degree: c.degree, coeffs: self.sd[c.degree].mul_vec(&c.coeffs) }
    }

    /// Indicator of the simplices of K' lying in the subdivision of a subcomplex,
    /// given the subcomplex mask of K.
    pub fn subdivided_mask(&self, mask: &[BitVec]) -> Vec<BitVec> {
        let kp = &self.complex;
        (0..=kp.dim())
            .map(|d| {
                BitVec::from_indices(
                    kp.count(d),
                    kp.simplices(d).iter().enumerate().filter_map(|(i, s)| {
                        let (cd, ci) = self.carrier(s);
                        mask.get(cd).is_some_and(|m| m.get(ci)).then_some(i)
                    }),
                )
            })
            .collect()
    }
}

pub fn barycentric_subdivision(k: &SimplicialComplex) -> Subdivision {
    let n = k.dim();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut names = Vec::new();
    let mut barycentre_of = Vec::new();
    for d in 0..=n.min(k.simplices.len().saturating_sub(1)) {
        offsets.push(names.len());
        for (i, s) in k.simplices(d).iter().enumerate() {
            names.push(format!("[{}]", k.simplex_names(s).join(",")));
            barycentre_of.push((d, i));
        }
    }
    // flags ending at each simplex, built in increasing dimension
    let mut ends: Vec<Vec<Vec<Simplex>>> = Vec::with_capacity(n + 1);
    for d in 0..k.simplices.len() {
        let mut here = Vec::with_capacity(k.count(d));
        for (i, s) in k.simplices(d).iter().enumerate() {
            let me = (offsets[d] + i) as VertexId;
            let mut flags = vec![vec![me]];
            let len = s.len();
            for mask in 1u32..((1u32 << len) - 1) {
                let face: Simplex = (0..len).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect();
                let fd = face.len() - 1;
                let fi = k.index[fd][&face];
                for f in &ends[fd][fi] {
                    let mut g: Simplex = f.clone();
                    g.push(me);
                    flags.push(g);
                }
            }
            here.push(flags);
        }
        ends.push(here);
    }
    let all: Vec<Simplex> = ends.iter().flatten().flatten().cloned().collect();
    let complex = SimplicialComplex::from_simplices(names, all);
    let sd = (0..k.simplices.len())
        .map(|d| {
            let cols = ends[d]
                .iter()
                .map(|flags| {
                    BitVec::from_indices(
                        complex.count(d),
                        flags.iter().filter(|f| f.len() == d + 1).map(|f| complex.index[d][f]),
                    )
                })
                .collect();
            Gf2Matrix::from_columns(complex.count(d), cols)
        })
        .collect();
    Subdivision { complex, sd, barycentre_of, offsets }
}

/// Dual blocks of a pure complex, realised as chains of its barycentric subdivision.
#[derive(Clone, Debug)]
pub struct DualBlockComplex {
    pub host: Subdivision,
    pub dim: usize,
    /// `blocks[d][i]`: the block of the `i`-th `d`-simplex, a chain of K' of degree `dim - d`.
    pub blocks: Vec<Vec<Chain>>,
}

impl DualBlockComplex {
    pub fn block(&self, d: usize, i: usize) -> &Chain {
        &self.blocks[d][i]
    }

    /// Block boundary as a matrix from blocks of d-simplices to blocks of (d+1)-simplices:
    /// the boundary of D(σ) is the sum of D(τ) over cofacets τ of σ.
    pub fn block_boundary_matrix(&self, k: &SimplicialComplex, d: usize) -> Gf2Matrix {
        if d >= self.dim {
            return Gf2Matrix::zeros(0, k.count(d));
        }
        k.boundary_matrix_unchecked(d + 1).transpose()
    }
}

pub fn dual_blocks(k: &SimplicialComplex) -> Result<DualBlockComplex> {
    if k.is_empty() || !k.is_pure() {
        return Err(Error::NotPure);
    }
    let n = k.dim();
    let host = barycentric_subdivision(k);
    let kp = &host.complex;
    let mut blocks: Vec<Vec<Chain>> = (0..=n).map(|d| (0..k.count(d)).map(|_| Chain::zero(kp, n - d)).collect()).collect();
    for d in 0..=n {
        let deg = n - d;
        for (j, s) in kp.simplices(deg).iter().enumerate() {
            let (ld, li) = host.leader(s);
            if ld == d {
                blocks[d][li].coeffs.set(j, true);
            }
        }
    }
    Ok(DualBlockComplex { host, dim: n, blocks })
}
