//! Brute-force point counts of selected strata over small prime fields.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::field::PrimeField;
use super::subspace::{enumerate_subspaces, Subspace, Vector};
use crate::counting::{CountTable, FiberType};
use crate::diagram::complex::FaceLabel;

/// Points, lines and planes of P^3(F_p).
pub struct Geometry {
    pub field: PrimeField,
    pub points: Vec<Subspace>,
    pub lines: Vec<Subspace>,
    pub planes: Vec<Subspace>,
}

impl Geometry {
    pub fn new(field: PrimeField) -> Geometry {
        Geometry {
            field,
            points: enumerate_subspaces(field, 1),
            lines: enumerate_subspaces(field, 2),
            planes: enumerate_subspaces(field, 3),
        }
    }

    fn points_on<'a>(&'a self, s: &'a Subspace) -> impl Iterator<Item = &'a Subspace> + 'a {
        self.points.iter().filter(move |p| s.contains(self.field, p))
    }

    fn lines_between<'a>(
        &'a self,
        lo: &'a Subspace,
        hi: &'a Subspace,
    ) -> impl Iterator<Item = &'a Subspace> + 'a {
        let f = self.field;
        self.lines.iter().filter(move |l| l.contains(f, lo) && hi.contains(f, l))
    }

    fn planes_through<'a>(&'a self, s: &'a Subspace) -> impl Iterator<Item = &'a Subspace> + 'a {
        self.planes.iter().filter(move |h| h.contains(self.field, s))
    }
}

/// A fixed flag point ⊂ line ⊂ plane.
#[derive(Clone, Debug)]
pub struct BaseFlag {
    pub point: Subspace,
    pub line: Subspace,
    pub plane: Subspace,
}

impl BaseFlag {
    pub fn standard(f: PrimeField) -> BaseFlag {
        BaseFlag {
            point: Subspace::span(f, &[[1, 0, 0, 0]]),
            line: Subspace::span(f, &[[1, 0, 0, 0], [0, 1, 0, 0]]),
            plane: Subspace::span(f, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]),
        }
    }

    /// Image of the standard flag under an invertible matrix.
    pub fn from_matrix(f: PrimeField, g: &[Vector; 4]) -> Option<BaseFlag> {
        if Subspace::span(f, g).dim() != 4 {
            return None;
        }
        let s = BaseFlag::standard(f);
        Some(BaseFlag {
            point: s.point.transform(f, g),
            line: s.line.transform(f, g),
            plane: s.plane.transform(f, g),
        })
    }

    /// A second flag, not equal to the standard one.
    pub fn alternate(f: PrimeField) -> BaseFlag {
        BaseFlag::from_matrix(f, &[[1, 1, 1, 1], [0, 1, 2, 3], [0, 0, 1, 3], [1, 0, 0, 2]])
            .or_else(|| BaseFlag::from_matrix(f, &[[0, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1]]))
            .expect("an invertible matrix")
    }
}

/// Subspaces assigned to face labels.
#[derive(Clone, Debug, Default)]
pub struct TetraConfig {
    pub planes: BTreeMap<FaceLabel, Subspace>,
}

impl TetraConfig {
    pub fn set(&mut self, label: &str, s: Subspace) {
        self.planes.insert(FaceLabel::parse(label).expect("valid label"), s);
    }

    pub fn get(&self, label: &str) -> Option<&Subspace> {
        self.planes.get(&FaceLabel::parse(label)?)
    }

    /// Dimensions match labels and x_I ⊆ x_J whenever I ⊂ J.
    pub fn is_valid(&self, f: PrimeField) -> bool {
        self.planes.iter().all(|(l, s)| s.dim() == l.level())
            && self.planes.iter().all(|(a, sa)| {
                self.planes.iter().all(|(b, sb)| {
                    a.mask() & b.mask() != a.mask() || a == b || sb.contains(f, sa)
                })
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("the four elements are not pairwise distinct")]
    NotDistinct,
    #[error("the points are not collinear")]
    NotCollinear,
    #[error("the planes do not share a line")]
    NotCoaxial,
    #[error("expected {expected}-dimensional subspaces")]
    WrongDimension { expected: usize },
}

/// Cross-ratio of four distinct points of P^1 given as homogeneous pairs
/// `(a, b)` (the point `a/b`; `(1, 0)` is ∞). Sends (0, 1, ∞, λ) to λ.
pub fn cross_ratio(f: PrimeField, pts: [(u32, u32); 4]) -> Result<u32, GeomError> {
    let br = |i: usize, j: usize| {
        f.sub(f.mul(pts[i].0, pts[j].1), f.mul(pts[j].0, pts[i].1))
    };
    for i in 0..4 {
        if pts[i].0 % f.p() == 0 && pts[i].1 % f.p() == 0 {
            return Err(GeomError::NotDistinct);
        }
        for j in i + 1..4 {
            if br(i, j) == 0 {
                return Err(GeomError::NotDistinct);
            }
        }
    }
    let num = f.mul(br(3, 0), br(1, 2));
    let den = f.mul(br(3, 2), br(1, 0));
    Ok(f.mul(num, f.inv(den).unwrap()))
}

/// Coordinates of a vector of a 2-dimensional subspace in its RREF basis.
fn line_coords(line: &Subspace, v: &Vector) -> (u32, u32) {
    let b = line.basis();
    let c0 = b[0].iter().position(|&x| x != 0).unwrap();
    let c1 = b[1].iter().position(|&x| x != 0).unwrap();
    (v[c0], v[c1])
}

/// Cross-ratio of four collinear points.
pub fn cross_ratio_points(f: PrimeField, pts: &[Subspace; 4]) -> Result<u32, GeomError> {
    if pts.iter().any(|p| p.dim() != 1) {
        return Err(GeomError::WrongDimension { expected: 1 });
    }
    let line = pts.iter().fold(Subspace::zero(), |acc, p| acc.join(f, p));
    match line.dim() {
        1 => return Err(GeomError::NotDistinct),
        2 => {}
        _ => return Err(GeomError::NotCollinear),
    }
    cross_ratio(f, std::array::from_fn(|i| line_coords(&line, &pts[i].basis()[0])))
}

/// Cross-ratio of four planes through a common line, read on a line skew to it.
pub fn cross_ratio_planes(f: PrimeField, planes: &[Subspace; 4]) -> Result<u32, GeomError> {
    if planes.iter().any(|p| p.dim() != 3) {
        return Err(GeomError::WrongDimension { expected: 3 });
    }
    let axis = planes.iter().skip(1).fold(planes[0].clone(), |acc, h| acc.meet(f, h));
    match axis.dim() {
        3 => return Err(GeomError::NotDistinct),
        2 => {}
        _ => return Err(GeomError::NotCoaxial),
    }
    let skew = enumerate_subspaces(f, 2)
        .into_iter()
        .find(|m| m.meet_dim(f, &axis) == 0)
        .expect("a skew line exists");
    let pts: Vec<Subspace> = planes.iter().map(|h| h.meet(f, &skew)).collect();
    let pts: [Subspace; 4] = pts.try_into().unwrap();
    cross_ratio_points(f, &pts)
}

/// Full flags in general position with respect to the base flag.
pub fn count_open_flag_orbit(g: &Geometry, base: &BaseFlag) -> u64 {
    let f = g.field;
    g.points
        .par_iter()
        .filter(|p| p.meet_dim(f, &base.plane) == 0)
        .map(|p| {
            g.lines
                .iter()
                .filter(|l| l.contains(f, p) && l.meet_dim(f, &base.line) == 0)
                .map(|l| g.planes_through(l).filter(|h| !h.contains(f, &base.point)).count() as u64)
                .sum::<u64>()
        })
        .sum()
}

/// All planes collapsed onto the base plane.
pub fn count_a_star(g: &Geometry, base: &BaseFlag) -> u64 {
    let f = g.field;
    let (x1, x12, x123) = (&base.point, &base.line, &base.plane);
    let pencil: Vec<&Subspace> = g.lines_between(x1, x123).filter(|l| *l != x12).collect();
    let x2s: Vec<&Subspace> = g.points_on(x12).filter(|p| *p != x1).collect();
    x2s.par_iter()
        .map(|x2| {
            let mut n = 0u64;
            for x13 in &pencil {
                for x3 in g.points_on(x13).filter(|p| p != &x1) {
                    let x23 = x2.join(f, x3);
                    for x14 in pencil.iter().filter(|l| *l != x13) {
                        for x4 in g.points_on(x14).filter(|p| p != &x1 && !x23.contains(f, p)) {
                            debug_assert!(a_star_config(f, base, x2, x3, x4).is_valid(f));
                            let _ = x4;
                            n += 1;
                        }
                    }
                }
            }
            n
        })
        .sum()
}

fn a_star_config(f: PrimeField, base: &BaseFlag, x2: &Subspace, x3: &Subspace, x4: &Subspace) -> TetraConfig {
    let mut c = TetraConfig::default();
    let pts = [&base.point, x2, x3, x4];
    for i in 0..4 {
        c.set(&(i + 1).to_string(), pts[i].clone());
        for j in i + 1..4 {
            c.set(&format!("{}{}", i + 1, j + 1), pts[i].join(f, pts[j]));
        }
    }
    for l in ["123", "124", "134", "234"] {
        c.set(l, base.plane.clone());
    }
    c
}

/// All points collapsed onto the base point (the dual recipe).
pub fn count_a(g: &Geometry, base: &BaseFlag) -> u64 {
    let f = g.field;
    let (x1, x12, x123) = (&base.point, &base.line, &base.plane);
    let pencil: Vec<&Subspace> = g.lines_between(x1, x123).filter(|l| *l != x12).collect();
    let x124s: Vec<&Subspace> = g.planes_through(x12).filter(|h| *h != x123).collect();
    x124s
        .par_iter()
        .map(|x124| {
            let mut n = 0u64;
            for x13 in &pencil {
                for x134 in g.planes_through(x13).filter(|h| h != &x123) {
                    let x14 = x124.meet(f, x134);
                    for x23 in pencil.iter().filter(|l| *l != x13) {
                        n += g
                            .planes_through(x23)
                            .filter(|h| h != &x123 && !h.contains(f, &x14))
                            .count() as u64;
                    }
                }
            }
            n
        })
        .sum()
}

/// Statistics of the type-B enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BCount {
    pub count: u64,
    /// Choices of (x2, x3, x4, x124, x134) considered.
    pub choices: u64,
    /// Choices admitting exactly one closing plane.
    pub uniquely_closed: u64,
}

/// All lines collapsed onto the base line; the last plane is pinned by the
/// cross-ratio condition.
pub fn count_b_detailed(g: &Geometry, base: &BaseFlag) -> BCount {
    let f = g.field;
    let (x1, x12, x123) = (&base.point, &base.line, &base.plane);
    let pts: Vec<&Subspace> = g.points_on(x12).filter(|p| *p != x1).collect();
    let pencil: Vec<&Subspace> = g.planes_through(x12).filter(|h| *h != x123).collect();
    let skew = g.lines.iter().find(|m| m.meet_dim(f, x12) == 0).expect("a skew line exists");
    let plane_param = |h: &Subspace| line_coords(skew, &h.meet(f, skew).basis()[0]);
    let point_param = |p: &Subspace| line_coords(x12, &p.basis()[0]);
    let p123 = plane_param(x123);
    let p1 = point_param(x1);
    let params: Vec<(u32, u32)> = pencil.iter().map(|h| plane_param(h)).collect();
    let mut out = BCount::default();
    for x2 in &pts {
        for x3 in pts.iter().filter(|p| p != &x2) {
            for x4 in pts.iter().filter(|p| p != &x2 && p != &x3) {
                let cr_pts = cross_ratio(f, [p1, point_param(x2), point_param(x3), point_param(x4)])
                    .expect("distinct collinear points");
                for i124 in 0..pencil.len() {
                    for i134 in (0..pencil.len()).filter(|&i| i != i124) {
                        out.choices += 1;
                        let closing = (0..pencil.len())
                            .filter(|&i| i != i124 && i != i134)
                            .filter(|&i234| {
                                let planes = [params[i234], params[i134], params[i124], p123];
                                cross_ratio(f, planes) == Ok(cr_pts)
                            })
                            .count() as u64;
                        if closing == 1 {
                            out.uniquely_closed += 1;
                        }
                        out.count += closing;
                    }
                }
            }
        }
    }
    out
}

pub fn count_b(g: &Geometry, base: &BaseFlag) -> u64 {
    count_b_detailed(g, base).count
}

/// Points of P^2 off the six lines through pairs of four general points.
pub fn count_arrangement_complement(f: PrimeField) -> u64 {
    let gens: [[u32; 3]; 4] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]];
    let cross = |a: [u32; 3], b: [u32; 3]| -> [u32; 3] {
        [
            f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
            f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
            f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
        ]
    };
    let mut lines = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            lines.push(cross(gens[i], gens[j]));
        }
    }
    let p = f.p();
    let mut n = 0;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                // normalized representatives: first nonzero coordinate is 1
                let v = [a, b, c];
                let lead = v.iter().find(|&&x| x != 0);
                if lead != Some(&1) {
                    continue;
                }
                let on_line = lines.iter().any(|l| {
                    (0..3).fold(0, |acc, k| f.add(acc, f.mul(l[k], v[k]))) == 0
                });
                if !on_line {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Strata with an oracle.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum OracleKind {
    X0,
    A,
    #[serde(rename = "Astar")]
    AStar,
    B,
    /// The arrangement-complement fiber factor.
    #[serde(rename = "arrangement")]
    Arrangement,
}

impl OracleKind {
    pub const ALL: [OracleKind; 5] =
        [OracleKind::X0, OracleKind::A, OracleKind::AStar, OracleKind::B, OracleKind::Arrangement];

    /// Table row this oracle is compared against (split type, shift mask).
    pub fn table_row(self) -> Option<(&'static str, &'static str)> {
        match self {
            OracleKind::X0 => Some(("X0", "000")),
            OracleKind::A => Some(("X0", "100")),
            OracleKind::AStar => Some(("X0", "001")),
            OracleKind::B => Some(("X0", "010")),
            OracleKind::Arrangement => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OracleKind::X0 => "X0",
            OracleKind::A => "A",
            OracleKind::AStar => "Astar",
            OracleKind::B => "B",
            OracleKind::Arrangement => "arrangement",
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OracleKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "X0" | "X∅" => Ok(OracleKind::X0),
            "A" => Ok(OracleKind::A),
            "Astar" | "A*" => Ok(OracleKind::AStar),
            "B" => Ok(OracleKind::B),
            "arrangement" | "I" => Ok(OracleKind::Arrangement),
            _ => Err(format!("unknown oracle type `{s}`")),
        }
    }
}

pub fn count_stratum(kind: OracleKind, g: &Geometry, base: &BaseFlag) -> u64 {
    match kind {
        OracleKind::X0 => count_open_flag_orbit(g, base),
        OracleKind::A => count_a(g, base),
        OracleKind::AStar => count_a_star(g, base),
        OracleKind::B => count_b(g, base),
        OracleKind::Arrangement => count_arrangement_complement(g.field),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleResult {
    #[serde(rename = "type")]
    pub kind: OracleKind,
    pub q: u32,
    pub oracle_count: u64,
    pub alternate_flag_count: u64,
    pub table_count: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Expected value from the table (or the fiber factor for the arrangement).
pub fn table_value(kind: OracleKind, table: &CountTable, q: u32) -> Option<BigInt> {
    match kind.table_row() {
        Some((split, shift)) => Some(table.row_by_name(split, shift)?.count.eval_i64(q as i64)),
        None => Some(FiberType::I.factor().eval_i64(q as i64)),
    }
}

/// Runs the oracles, each at the standard and an alternate base flag.
pub fn run_oracle(primes: &[u32], kinds: &[OracleKind], table: &CountTable) -> Result<Vec<OracleResult>, super::FieldError> {
    let mut out = Vec::new();
    for &q in primes {
        let f = PrimeField::new(q as u64)?;
        let g = Geometry::new(f);
        let std_flag = BaseFlag::standard(f);
        let alt_flag = BaseFlag::alternate(f);
        for &kind in kinds {
            let oracle_count = count_stratum(kind, &g, &std_flag);
            let alternate_flag_count = count_stratum(kind, &g, &alt_flag);
            let expected = table_value(kind, table, q);
            let matches = expected.as_ref() == Some(&BigInt::from(oracle_count))
                && alternate_flag_count == oracle_count;
            out.push(OracleResult {
                kind,
                q,
                oracle_count,
                alternate_flag_count,
                table_count: expected.map(|e| e.to_string()).unwrap_or_else(|| "-".into()),
                matches,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(q: u64) -> Geometry {
        Geometry::new(PrimeField::new(q).unwrap())
    }

    #[test]
    fn cross_ratio_normalization() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(cross_ratio(f, [(0, 1), (1, 1), (1, 0), (2, 1)]), Ok(2));
        for l in 2..5 {
            assert_eq!(cross_ratio(f, [(0, 1), (1, 1), (1, 0), (l, 1)]), Ok(l));
        }
        assert_eq!(cross_ratio(f, [(0, 1), (0, 2), (1, 0), (2, 1)]), Err(GeomError::NotDistinct));
    }

    #[test]
    fn cross_ratio_double_transpositions() {
        let f = PrimeField::new(7).unwrap();
        let p = [(0, 1), (1, 1), (3, 1), (1, 0)];
        let v = cross_ratio(f, p).unwrap();
        for perm in [[1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]] {
            assert_eq!(cross_ratio(f, perm.map(|i| p[i])).unwrap(), v);
        }
    }

    #[test]
    fn cross_ratio_invariance() {
        let f = PrimeField::new(7).unwrap();
        let pts: [Subspace; 4] = [
            Subspace::span(f, &[[1, 0, 0, 0]]),
            Subspace::span(f, &[[0, 1, 0, 0]]),
            Subspace::span(f, &[[1, 1, 0, 0]]),
            Subspace::span(f, &[[1, 3, 0, 0]]),
        ];
        let v = cross_ratio_points(f, &pts).unwrap();
        let g = [[1, 2, 0, 1], [3, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        let moved: [Subspace; 4] = std::array::from_fn(|i| pts[i].transform(f, &g));
        assert_eq!(cross_ratio_points(f, &moved).unwrap(), v);
        let bad = [pts[0].clone(), pts[1].clone(), pts[2].clone(), Subspace::span(f, &[[0, 0, 1, 0]])];
        assert_eq!(cross_ratio_points(f, &bad), Err(GeomError::NotCollinear));
    }

    #[test]
    fn b_closure_unique() {
        let g = geo(5);
        let b = count_b_detailed(&g, &BaseFlag::standard(g.field));
        assert_eq!(b.count, 1200);
        assert_eq!(b.uniquely_closed, b.choices);
        let f = g.field;
        let planes = enumerate_subspaces(f, 3);
        let axis = Subspace::span(f, &[[1, 0, 0, 0], [0, 1, 0, 0]]);
        let through: Vec<Subspace> = planes.into_iter().filter(|h| h.contains(f, &axis)).take(4).collect();
        let v = cross_ratio_planes(f, &through.clone().try_into().unwrap()).unwrap();
        assert!(v > 1);
    }

    #[test]
    fn small_counts() {
        let g = geo(2);
        let b = BaseFlag::standard(g.field);
        assert_eq!(count_open_flag_orbit(&g, &b), 64);
        assert_eq!(count_b(&g, &b), 0);
        let g = geo(3);
        let b = BaseFlag::standard(g.field);
        assert_eq!(count_a_star(&g, &b), 108);
        assert_eq!(count_a(&g, &b), 108);
        assert_eq!(count_open_flag_orbit(&g, &b), 729);
    }

    #[test]
    fn arrangement() {
        let c = |q| count_arrangement_complement(PrimeField::new(q).unwrap());
        assert_eq!(c(3), 0);
        assert_eq!(c(5), 6);
        assert_eq!(c(7), 20);
    }

    #[test]
    fn config_validity() {
        let f = PrimeField::new(3).unwrap();
        let b = BaseFlag::standard(f);
        let x2 = Subspace::span(f, &[[1, 1, 0, 0]]);
        let x3 = Subspace::span(f, &[[0, 0, 1, 0]]);
        let x4 = Subspace::span(f, &[[1, 2, 1, 0]]);
        assert!(a_star_config(f, &b, &x2, &x3, &x4).is_valid(f));
        let mut bad = a_star_config(f, &b, &x2, &x3, &x4);
        bad.set("12", Subspace::span(f, &[[0, 0, 1, 0], [0, 0, 0, 1]]));
        assert!(!bad.is_valid(f));
    }
}
