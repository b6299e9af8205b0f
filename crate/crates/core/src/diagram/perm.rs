//! Permutations of {1,2,3,4} and the duality involution.

use std::fmt;

use super::complex::{Edge, Face, FaceKind, FaceLabel, SharpEdge};

/// A permutation of {1,2,3,4}; `images[i-1]` is the image of `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    images: [u8; 4],
}

impl Perm {
    pub fn new(images: [u8; 4]) -> Option<Perm> {
        let mut seen = [false; 5];
        for &i in &images {
            if !(1..=4).contains(&i) || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm { images })
    }

    pub fn identity() -> Perm {
        Perm { images: [1, 2, 3, 4] }
    }

    pub fn transposition(i: u8, j: u8) -> Perm {
        let mut images = [1, 2, 3, 4];
        images.swap(i as usize - 1, j as usize - 1);
        Perm { images }
    }

    /// All 24 permutations in lexicographic order of image vectors.
    pub fn all() -> Vec<Perm> {
        let mut out = Vec::with_capacity(24);
        for a in 1..=4 {
            for b in 1..=4 {
                for c in 1..=4 {
                    for d in 1..=4 {
                        if let Some(p) = Perm::new([a, b, c, d]) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn apply(self, i: u8) -> u8 {
        self.images[i as usize - 1]
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(self, other: Perm) -> Perm {
        Perm { images: std::array::from_fn(|k| self.apply(other.images[k])) }
    }

    pub fn inverse(self) -> Perm {
        let mut images = [0; 4];
        for i in 1..=4u8 {
            images[self.apply(i) as usize - 1] = i;
        }
        Perm { images }
    }

    pub fn label(self, l: FaceLabel) -> FaceLabel {
        let mask = l.members().fold(0u8, |m, i| m | 1 << (self.apply(i) - 1));
        FaceLabel::new(mask).unwrap()
    }

    pub fn edge(self, e: Edge) -> Edge {
        let (a, b) = e.endpoints();
        Edge::between(self.label(a), self.label(b)).unwrap()
    }

    pub fn face(self, f: Face) -> Face {
        let kind = match f.kind() {
            FaceKind::Hypersimplex(k) => FaceKind::Hypersimplex(k),
            FaceKind::T1(t) => FaceKind::T1(self.label(t)),
            FaceKind::T2Lower(t) => FaceKind::T2Lower(self.label(t)),
            FaceKind::T2Star(i) => FaceKind::T2Star(self.apply(i)),
            FaceKind::T3(i) => FaceKind::T3(self.apply(i)),
        };
        Face::find(kind).unwrap()
    }

    pub fn sharp(self, s: SharpEdge) -> SharpEdge {
        SharpEdge::new(self.edge(s.edge()), self.face(s.face())).unwrap()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}{}{}{}]", self.images[0], self.images[1], self.images[2], self.images[3])
    }
}

/// Complementation of labels and everything built from them.
pub mod dual {
    use super::*;

    pub fn label(l: FaceLabel) -> FaceLabel {
        l.complement()
    }

    pub fn edge(e: Edge) -> Edge {
        let (a, b) = e.endpoints();
        Edge::between(a.complement(), b.complement()).unwrap()
    }

    pub fn face(f: Face) -> Face {
        let kind = match f.kind() {
            FaceKind::Hypersimplex(k) => FaceKind::Hypersimplex(4 - k),
            FaceKind::T1(t) => FaceKind::T3(t.complement().members().next().unwrap()),
            FaceKind::T3(i) => FaceKind::T1(FaceLabel::new(0xf & !(1 << (i - 1))).unwrap()),
            FaceKind::T2Lower(t) => FaceKind::T2Star(t.complement().members().next().unwrap()),
            FaceKind::T2Star(i) => {
                FaceKind::T2Lower(FaceLabel::new(0xf & !(1 << (i - 1))).unwrap())
            }
        };
        Face::find(kind).unwrap()
    }

    pub fn sharp(s: SharpEdge) -> SharpEdge {
        SharpEdge::new(edge(s.edge()), face(s.face())).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws() {
        let all = Perm::all();
        assert_eq!(all.len(), 24);
        for &p in &all {
            assert_eq!(p.compose(p.inverse()), Perm::identity());
            for &q in &all {
                for l in crate::diagram::complex::all_labels() {
                    assert_eq!(p.compose(q).label(*l), p.label(q.label(*l)));
                }
            }
        }
    }

    #[test]
    fn duality_is_involution() {
        for e in Edge::all() {
            assert_eq!(dual::edge(dual::edge(e)), e);
            assert_eq!(dual::edge(e).level(), 4 - e.level());
        }
        for f in Face::all() {
            assert_eq!(dual::face(dual::face(f)), f);
            let img: Vec<Edge> = f.edges().iter().map(|&e| dual::edge(e)).collect();
            for e in img {
                assert!(dual::face(f).edges().contains(&e));
            }
        }
        for s in SharpEdge::all() {
            assert_eq!(dual::sharp(dual::sharp(s)), s);
        }
    }

    #[test]
    fn faces_map_to_faces() {
        for p in Perm::all() {
            for f in Face::all() {
                let g = p.face(f);
                for &e in f.edges() {
                    assert!(g.edges().contains(&p.edge(e)));
                }
            }
        }
    }
}
