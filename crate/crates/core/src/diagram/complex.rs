//! The hypersimplex edge complex: face labels, edges, faces, sharp edges,
//! components and the related-triangle structure.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// A proper nonempty subset of {1,2,3,4}, stored as a bitmask (bit `i-1` for `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct FaceLabel(u8);

impl FaceLabel {
    pub fn new(mask: u8) -> Option<FaceLabel> {
        if mask == 0 || mask >= 15 {
            None
        } else {
            Some(FaceLabel(mask))
        }
    }

    /// Builds a label from its 1-based members.
    pub fn from_members(members: &[u8]) -> Option<FaceLabel> {
        let mut mask = 0u8;
        for &m in members {
            if !(1..=4).contains(&m) {
                return None;
            }
            mask |= 1 << (m - 1);
        }
        FaceLabel::new(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn level(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn members(self) -> impl Iterator<Item = u8> {
        (1..=4u8).filter(move |i| self.0 & (1 << (i - 1)) != 0)
    }

    pub fn contains(self, i: u8) -> bool {
        self.0 & (1 << (i - 1)) != 0
    }

    pub fn complement(self) -> FaceLabel {
        FaceLabel(!self.0 & 0xf)
    }

    /// Position in the canonical order (level, then bitmask).
    pub fn index(self) -> usize {
        all_labels().iter().position(|&l| l == self).unwrap()
    }

    pub fn parse(s: &str) -> Option<FaceLabel> {
        let mut members = Vec::new();
        for c in s.chars() {
            members.push(c.to_digit(10)? as u8);
        }
        let l = FaceLabel::from_members(&members)?;
        (l.level() == members.len()).then_some(l)
    }
}

impl fmt::Display for FaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in self.members() {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl PartialOrd for FaceLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FaceLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level(), self.0).cmp(&(other.level(), other.0))
    }
}

/// The 14 labels in canonical order.
pub fn all_labels() -> &'static [FaceLabel; 14] {
    static LABELS: OnceLock<[FaceLabel; 14]> = OnceLock::new();
    LABELS.get_or_init(|| {
        let mut v: Vec<FaceLabel> = (1..15).map(FaceLabel).collect();
        v.sort();
        v.try_into().unwrap()
    })
}

/// An edge of one of the hypersimplices, identified by its index 0..24.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Edge(pub(crate) u8);

impl Edge {
    pub const COUNT: usize = 24;

    pub fn from_index(i: usize) -> Edge {
        assert!(i < Self::COUNT);
        Edge(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The edge joining two labels, if they form one.
    pub fn between(a: FaceLabel, b: FaceLabel) -> Option<Edge> {
        let c = complex();
        let e = c.edge_lookup[a.mask() as usize][b.mask() as usize];
        (e != u8::MAX).then_some(Edge(e))
    }

    pub fn endpoints(self) -> (FaceLabel, FaceLabel) {
        complex().edges[self.index()]
    }

    pub fn level(self) -> usize {
        self.endpoints().0.level()
    }

    pub fn all() -> impl Iterator<Item = Edge> {
        (0..Self::COUNT as u8).map(Edge)
    }

    pub fn bit(self) -> u32 {
        1 << self.0
    }

    /// Parses `a-b`, e.g. `12-13`.
    pub fn parse(s: &str) -> Option<Edge> {
        let (a, b) = s.split_once('-')?;
        Edge::between(FaceLabel::parse(a)?, FaceLabel::parse(b)?)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.endpoints();
        write!(f, "{a}-{b}")
    }
}

/// The kind of a face of the complex.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum FaceKind {
    Hypersimplex(u8),
    /// Points {i},{j},{k} for a triple.
    T1(FaceLabel),
    /// Pairs {ij},{ik},{jk} for a triple.
    T2Lower(FaceLabel),
    /// Pairs {ij},{ik},{il} containing `i`.
    T2Star(u8),
    /// The three triples containing `i`.
    T3(u8),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Face(pub(crate) u8);

impl Face {
    pub const COUNT: usize = 19;

    pub fn from_index(i: usize) -> Face {
        assert!(i < Self::COUNT);
        Face(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Face> {
        (0..Self::COUNT as u8).map(Face)
    }

    pub fn hypersimplex(level: usize) -> Face {
        assert!((1..=3).contains(&level));
        Face(level as u8 - 1)
    }

    pub fn kind(self) -> FaceKind {
        complex().faces[self.index()].kind
    }

    pub fn edges(self) -> &'static [Edge] {
        &complex().faces[self.index()].edges
    }

    pub fn edge_mask(self) -> u32 {
        complex().faces[self.index()].edge_mask
    }

    pub fn is_triangle(self) -> bool {
        !matches!(self.kind(), FaceKind::Hypersimplex(_))
    }

    /// Level of the hypersimplex containing this face.
    pub fn level(self) -> usize {
        self.edges()[0].level()
    }

    pub fn find(kind: FaceKind) -> Option<Face> {
        Face::all().find(|f| f.kind() == kind)
    }

    pub fn parse(s: &str) -> Option<Face> {
        Face::all().find(|f| f.to_string() == s)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FaceKind::Hypersimplex(k) => write!(f, "H{k}"),
            FaceKind::T1(t) => write!(f, "T1_{t}"),
            FaceKind::T2Lower(t) => write!(f, "T2l_{t}"),
            FaceKind::T2Star(i) => write!(f, "T2s_{i}"),
            FaceKind::T3(i) => write!(f, "T3_{i}"),
        }
    }
}

/// An incidence (edge, face), identified by its index 0..72.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SharpEdge(pub(crate) u8);

impl SharpEdge {
    pub const COUNT: usize = 72;

    pub fn new(edge: Edge, face: Face) -> Option<SharpEdge> {
        let s = complex().sharp_lookup[edge.index()][face.index()];
        (s != u8::MAX).then_some(SharpEdge(s))
    }

    pub fn from_index(i: usize) -> SharpEdge {
        assert!(i < Self::COUNT);
        SharpEdge(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn edge(self) -> Edge {
        complex().sharp[self.index()].0
    }

    pub fn face(self) -> Face {
        complex().sharp[self.index()].1
    }

    pub fn all() -> impl Iterator<Item = SharpEdge> {
        (0..Self::COUNT as u8).map(SharpEdge)
    }

    pub fn bit(self) -> u128 {
        1 << self.0
    }

    /// Parses `edge@face`, e.g. `2-3@H1`.
    pub fn parse(s: &str) -> Option<SharpEdge> {
        let (e, f) = s.split_once('@')?;
        SharpEdge::new(Edge::parse(e)?, Face::parse(f)?)
    }
}

impl fmt::Display for SharpEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.edge(), self.face())
    }
}

/// A connected component of the chart: an affine hypersimplex factor or a
/// projective factor attached to a face.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Component {
    Affine(u8),
    Projective(Face),
}

impl Component {
    pub const COUNT: usize = 22;

    pub fn all() -> impl Iterator<Item = Component> {
        (1..=3)
            .map(Component::Affine)
            .chain(Face::all().map(Component::Projective))
    }

    pub fn edges(self) -> &'static [Edge] {
        match self {
            Component::Affine(k) => Face::hypersimplex(k as usize).edges(),
            Component::Projective(f) => f.edges(),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Affine(k) => write!(f, "A{k}"),
            Component::Projective(face) => write!(f, "P({face})"),
        }
    }
}

/// A triangle face as it appears inside one component.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TriangleCopy {
    pub component: Component,
    pub triangle: Face,
}

impl fmt::Display for TriangleCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.component, self.triangle)
    }
}

/// Two related triangle copies with an edge correspondence.
/// `phi[k]` is the edge of `y` matched with the `k`-th edge of `x.triangle`.
#[derive(Clone, Debug)]
pub struct RelatedPair {
    pub family: usize,
    pub x: TriangleCopy,
    pub y: TriangleCopy,
    pub phi: [Edge; 3],
}

/// Six triangle copies with pairwise correspondences.
#[derive(Clone, Debug)]
pub struct TriangleFamily {
    pub first: Face,
    pub second: Face,
    /// `corr[k]` is the edge of `second` matched with the `k`-th edge of `first`.
    pub corr: [Edge; 3],
    pub copies: [TriangleCopy; 6],
}

struct FaceInfo {
    kind: FaceKind,
    edges: Vec<Edge>,
    edge_mask: u32,
}

pub(crate) struct Complex {
    edges: Vec<(FaceLabel, FaceLabel)>,
    edge_lookup: [[u8; 16]; 16],
    faces: Vec<FaceInfo>,
    sharp: Vec<(Edge, Face)>,
    sharp_lookup: [[u8; Face::COUNT]; Edge::COUNT],
    families: Vec<TriangleFamily>,
    pairs: Vec<RelatedPair>,
}

pub(crate) fn complex() -> &'static Complex {
    static C: OnceLock<Complex> = OnceLock::new();
    C.get_or_init(Complex::build)
}

fn label(members: &[u8]) -> FaceLabel {
    FaceLabel::from_members(members).unwrap()
}

fn others(exclude: &[u8]) -> Vec<u8> {
    (1..=4).filter(|x| !exclude.contains(x)).collect()
}

impl Complex {
    fn build() -> Complex {
        let labels = all_labels();
        let mut edges = Vec::new();
        let mut edge_lookup = [[u8::MAX; 16]; 16];
        for (ia, &a) in labels.iter().enumerate() {
            for &b in &labels[ia + 1..] {
                let common = (a.mask() & b.mask()).count_ones() as usize;
                if a.level() == b.level() && common + 1 == a.level() {
                    let id = edges.len() as u8;
                    edge_lookup[a.mask() as usize][b.mask() as usize] = id;
                    edge_lookup[b.mask() as usize][a.mask() as usize] = id;
                    edges.push((a, b));
                }
            }
        }
        let tri = |vs: [FaceLabel; 3], lookup: &[[u8; 16]; 16]| -> Vec<Edge> {
            let mut es: Vec<Edge> = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| Edge(lookup[vs[i].mask() as usize][vs[j].mask() as usize]))
                .collect();
            es.sort();
            es
        };

        let mut kinds_edges: Vec<(FaceKind, Vec<Edge>)> = Vec::new();
        for k in 1..=3u8 {
            let es = (0..edges.len())
                .filter(|&e| edges[e].0.level() == k as usize)
                .map(|e| Edge(e as u8))
                .collect();
            kinds_edges.push((FaceKind::Hypersimplex(k), es));
        }
        let triples: Vec<FaceLabel> = labels.iter().copied().filter(|l| l.level() == 3).collect();
        for &t in &triples {
            let m: Vec<u8> = t.members().collect();
            let vs = [label(&[m[0]]), label(&[m[1]]), label(&[m[2]])];
            kinds_edges.push((FaceKind::T1(t), tri(vs, &edge_lookup)));
        }
        for &t in &triples {
            let m: Vec<u8> = t.members().collect();
            let vs = [label(&[m[0], m[1]]), label(&[m[0], m[2]]), label(&[m[1], m[2]])];
            kinds_edges.push((FaceKind::T2Lower(t), tri(vs, &edge_lookup)));
        }
        for i in 1..=4u8 {
            let o = others(&[i]);
            let vs = [label(&[i, o[0]]), label(&[i, o[1]]), label(&[i, o[2]])];
            kinds_edges.push((FaceKind::T2Star(i), tri(vs, &edge_lookup)));
        }
        for i in 1..=4u8 {
            let o = others(&[i]);
            let vs = [
                label(&[i, o[0], o[1]]),
                label(&[i, o[0], o[2]]),
                label(&[i, o[1], o[2]]),
            ];
            kinds_edges.push((FaceKind::T3(i), tri(vs, &edge_lookup)));
        }
        let faces: Vec<FaceInfo> = kinds_edges
            .into_iter()
            .map(|(kind, edges)| {
                let edge_mask = edges.iter().fold(0, |m, e| m | (1u32 << e.0));
                FaceInfo { kind, edges, edge_mask }
            })
            .collect();

        let mut sharp = Vec::new();
        let mut sharp_lookup = [[u8::MAX; Face::COUNT]; Edge::COUNT];
        for (fi, f) in faces.iter().enumerate() {
            for &e in &f.edges {
                sharp_lookup[e.index()][fi] = sharp.len() as u8;
                sharp.push((e, Face(fi as u8)));
            }
        }

        let mut c = Complex {
            edges,
            edge_lookup,
            faces,
            sharp,
            sharp_lookup,
            families: Vec::new(),
            pairs: Vec::new(),
        };
        c.build_families();
        c
    }

    fn face_of(&self, kind: FaceKind) -> Face {
        Face(self.faces.iter().position(|f| f.kind == kind).unwrap() as u8)
    }

    fn edge(&self, a: FaceLabel, b: FaceLabel) -> Edge {
        Edge(self.edge_lookup[a.mask() as usize][b.mask() as usize])
    }

    fn build_families(&mut self) {
        let triples: Vec<FaceLabel> =
            all_labels().iter().copied().filter(|l| l.level() == 3).collect();
        let mut raw: Vec<(Face, Face, Vec<(Edge, Edge)>)> = Vec::new();
        // Edge {j}{k} of T1 matches {ij}{ik} of the lower triangle.
        let lower_corr = |c: &Complex, t: FaceLabel| -> Vec<(Edge, Edge)> {
            let m: Vec<u8> = t.members().collect();
            (0..3)
                .map(|a| {
                    let i = m[a];
                    let jk: Vec<u8> = m.iter().copied().filter(|&x| x != i).collect();
                    let e1 = c.edge(label(&[jk[0]]), label(&[jk[1]]));
                    let e2 = c.edge(label(&[i, jk[0]]), label(&[i, jk[1]]));
                    (e1, e2)
                })
                .collect()
        };
        for &t in &triples {
            raw.push((
                self.face_of(FaceKind::T1(t)),
                self.face_of(FaceKind::T2Lower(t)),
                lower_corr(self, t),
            ));
        }
        for i in 1..=4u8 {
            let t = FaceLabel::new(0xf & !(1 << (i - 1))).unwrap();
            let dual = |c: &Complex, e: Edge| {
                let (a, b) = c.edges[e.index()];
                c.edge(a.complement(), b.complement())
            };
            let corr = lower_corr(self, t)
                .into_iter()
                .map(|(a, b)| (dual(self, a), dual(self, b)))
                .collect();
            raw.push((
                self.face_of(FaceKind::T3(i)),
                self.face_of(FaceKind::T2Star(i)),
                corr,
            ));
        }

        for (fam, (first, second, corr)) in raw.into_iter().enumerate() {
            let first_edges = &self.faces[first.index()].edges;
            let corr_arr: [Edge; 3] = std::array::from_fn(|k| {
                corr.iter().find(|(a, _)| *a == first_edges[k]).unwrap().1
            });
            let copies_of = |f: Face, level: usize| {
                [
                    TriangleCopy { component: Component::Affine(level as u8), triangle: f },
                    TriangleCopy {
                        component: Component::Projective(Face(level as u8 - 1)),
                        triangle: f,
                    },
                    TriangleCopy { component: Component::Projective(f), triangle: f },
                ]
            };
            let lf = self.faces[first.index()].edges[0].level_in(self);
            let ls = self.faces[second.index()].edges[0].level_in(self);
            let a = copies_of(first, lf);
            let b = copies_of(second, ls);
            let copies = [a[0], a[1], a[2], b[0], b[1], b[2]];
            for p in 0..6 {
                for q in p + 1..6 {
                    let (x, y) = (copies[p], copies[q]);
                    let xe = &self.faces[x.triangle.index()].edges;
                    let phi: [Edge; 3] = if x.triangle == y.triangle {
                        std::array::from_fn(|k| xe[k])
                    } else {
                        // x is a copy of `first`, y a copy of `second`.
                        corr_arr
                    };
                    self.pairs.push(RelatedPair { family: fam, x, y, phi });
                }
            }
            self.families.push(TriangleFamily { first, second, corr: corr_arr, copies });
        }
    }
}

impl Edge {
    fn level_in(self, c: &Complex) -> usize {
        c.edges[self.index()].0.level()
    }
}

/// The 8 related-triangle families.
pub fn related_triangle_families() -> &'static [TriangleFamily] {
    &complex().families
}

/// All 120 related pairs.
pub fn related_pairs() -> &'static [RelatedPair] {
    &complex().pairs
}

/// Bitmask of all edges at a level.
pub fn level_mask(level: usize) -> u32 {
    Face::hypersimplex(level).edge_mask()
}

/// Bitmask of the sharp edges belonging to a face.
pub fn face_sharp_mask(face: Face) -> u128 {
    face.edges()
        .iter()
        .fold(0, |m, &e| m | SharpEdge::new(e, face).unwrap().bit())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inventory() {
        assert_eq!(all_labels().len(), 14);
        let per_level: Vec<usize> = (1..=3).map(|k| Edge::all().filter(|e| e.level() == k).count()).collect();
        assert_eq!(per_level, vec![6, 12, 6]);
        assert_eq!(Face::all().filter(|f| f.is_triangle()).count(), 16);
        assert_eq!(Component::all().count(), Component::COUNT);
        assert_eq!(related_pairs().len(), 120);
    }

    #[test]
    fn edge_condition() {
        for e in Edge::all() {
            let (a, b) = e.endpoints();
            assert_eq!((a.mask() | b.mask()).count_ones() as usize, a.level() + 1);
            assert!(a < b);
        }
    }

    #[test]
    fn parse_roundtrip() {
        for e in Edge::all() {
            assert_eq!(Edge::parse(&e.to_string()), Some(e));
        }
        for s in SharpEdge::all() {
            assert_eq!(SharpEdge::parse(&s.to_string()), Some(s));
        }
        assert_eq!(Edge::parse("1-23"), None);
    }

    #[test]
    fn lower_correspondence() {
        let fam = &related_triangle_families()[0];
        let e23 = Edge::parse("2-3").unwrap();
        let k = fam.first.edges().iter().position(|&e| e == e23).unwrap();
        assert_eq!(fam.corr[k], Edge::parse("12-13").unwrap());
    }
}
