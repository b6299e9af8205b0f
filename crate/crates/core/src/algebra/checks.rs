//! End-to-end checks on the ring presentation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::field::{Field, Fp, Rationals};
use super::groebner::{GbError, GbOptions, GroebnerBasis};
use super::monomial::Monomial;
use super::poly::Polynomial;
use super::presentation::{
    build_completed_presentation, build_presentation, eliminate_linear, single_chain_relations, to_field, AlgebraError,
    Elimination, Family, Presentation, QPoly, Relation, VarId,
};
use super::quotient::{hilbert_function, pairing_rank, HilbertFunction, QuotientRing, RingError};
use crate::diagram::Perm;

/// Top degree of the ring (complex dimension of the space).
pub const TOP_DEGREE: u32 = 12;

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Groebner(#[from] GbError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A presentation reduced to the surviving generators, with its Gröbner basis.
pub struct RingContext<F: Field> {
    pub full: Presentation,
    pub elimination: Elimination,
    pub gb: GroebnerBasis<F>,
    pub seconds: f64,
    images: Vec<Polynomial<F::Elem>>,
}

impl<F: Field> RingContext<F> {
    pub fn build(f: &F, full: Presentation, opts: &GbOptions) -> Result<RingContext<F>, CheckError> {
        let elimination = eliminate_linear(&full)?;
        let start = Instant::now();
        let gb = GroebnerBasis::compute(f, elimination.reduced.nvars(), &elimination.reduced.relations_in(f), opts)?;
        let seconds = start.elapsed().as_secs_f64();
        let images = elimination.images().iter().map(|q| to_field(f, q)).collect();
        Ok(RingContext { full, elimination, gb, seconds, images })
    }

    /// Rewrites a polynomial in the 37 generators into the reduced ring over `F`.
    pub fn lower(&self, p: &QPoly) -> Polynomial<F::Elem> {
        let f = self.gb.field();
        to_field(f, p).substitute(f, &self.images)
    }

    pub fn normal_form(&self, p: &QPoly) -> Result<Polynomial<F::Elem>, GbError> {
        self.gb.normal_form(&self.lower(p))
    }

    pub fn names(&self) -> Vec<String> {
        self.elimination.reduced.names()
    }
}

/// The degree-12 witness y1^3 y12^2 y123 a b a* c1 c*1 d23, in the 37 generators.
pub fn socle_witness_monomial(full: &Presentation) -> QPoly {
    use VarId::*;
    let factors = [
        (Y1(1), 3),
        (Y2(1, 2), 2),
        (Y3(1, 2, 3), 1),
        (A, 1),
        (B, 1),
        (AStar, 1),
        (C(1), 1),
        (CStar(1), 1),
        (D(2, 3), 1),
    ];
    let mut m = Monomial::one();
    for (v, e) in factors {
        let i = full.var_index(v).expect("generator present");
        m = m.with_exp(i, e);
    }
    Polynomial::monomial(&Rationals, m)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WitnessReport {
    pub monomial: String,
    pub normal_form: String,
    pub nonzero: bool,
    /// Every generator times the witness has normal form zero.
    pub annihilated_by_generators: bool,
    /// The image under the transposition (12) is nonzero too.
    pub transposed_nonzero: bool,
}

pub fn socle_witness<F: Field>(ctx: &RingContext<F>) -> Result<WitnessReport, CheckError> {
    let names = ctx.names();
    let w = socle_witness_monomial(&ctx.full);
    let lowered = ctx.lower(&w);
    let nf = ctx.gb.normal_form(&lowered)?;
    let f = ctx.gb.field();
    let mut annihilated = true;
    for v in 0..ctx.elimination.reduced.nvars() {
        let p = lowered.mul_monomial(&Monomial::var(v));
        annihilated &= ctx.gb.normal_form(&p)?.is_zero();
    }
    let swapped = ctx.full.act(&w, Perm::transposition(1, 2)).expect("all generators present");
    let transposed = ctx.normal_form(&swapped)?;
    Ok(WitnessReport {
        monomial: lowered.format(f, &names),
        normal_form: nf.format(f, &names),
        nonzero: !nf.is_zero(),
        annihilated_by_generators: annihilated,
        transposed_nonzero: !transposed.is_zero(),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct S4Violation {
    pub permutation: String,
    pub relation: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct S4Report {
    pub permutations: usize,
    pub relations: usize,
    pub violations: Vec<S4Violation>,
}

impl S4Report {
    pub fn stable(&self) -> bool {
        self.violations.is_empty()
    }
}

fn perm_name(p: Perm) -> String {
    (1..=4).map(|i| p.apply(i).to_string()).collect()
}

/// Checks that every permuted relation has normal form zero.
pub fn s4_stability_check<F: Field>(ctx: &RingContext<F>, perms: &[Perm]) -> Result<S4Report, CheckError> {
    let names = ctx.full.names();
    let jobs: Vec<(Perm, &Relation)> =
        perms.iter().flat_map(|&p| ctx.full.relations().iter().map(move |r| (p, r))).collect();
    let results: Vec<Option<S4Violation>> = jobs
        .par_iter()
        .map(|(p, r)| {
            let img = ctx.full.act(&r.poly, *p).expect("generators closed under S4");
            let zero = ctx.normal_form(&img)?.is_zero();
            Ok((!zero).then(|| S4Violation {
                permutation: perm_name(*p),
                relation: r.poly.format(&Rationals, &names),
            }))
        })
        .collect::<Result<_, CheckError>>()?;
    Ok(S4Report {
        permutations: perms.len(),
        relations: ctx.full.relations().len(),
        violations: results.into_iter().flatten().collect(),
    })
}

/// The presentation with family (iv) replaced by the relations of one flag.
pub fn single_chain_presentation(full: &Presentation) -> Presentation {
    let mut rels: Vec<Relation> = full.relations().iter().filter(|r| r.family != Family::IV).cloned().collect();
    rels.extend(single_chain_relations().into_iter().map(|poly| Relation { family: Family::IV, poly, supplementary: false }));
    Presentation::new(full.vars().to_vec(), rels)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ChainReport {
    /// Every single-chain relation lies in the full ideal.
    pub single_in_full: bool,
    /// Every family (iv) relation lies in the single-chain ideal.
    pub full_in_single: bool,
    /// The two reduced bases coincide.
    pub identical_bases: bool,
}

impl ChainReport {
    pub fn equal(&self) -> bool {
        self.single_in_full && self.full_in_single && self.identical_bases
    }
}

pub fn single_chain_equivalence<F: Field>(ctx: &RingContext<F>, opts: &GbOptions) -> Result<ChainReport, CheckError> {
    let single = RingContext::build(ctx.gb.field(), single_chain_presentation(&ctx.full), opts)?;
    let mut single_in_full = true;
    for p in single.full.family(Family::IV) {
        single_in_full &= ctx.normal_form(p)?.is_zero();
    }
    let mut full_in_single = true;
    for p in ctx.full.family(Family::IV) {
        full_in_single &= single.normal_form(p)?.is_zero();
    }
    let names = ctx.names();
    Ok(ChainReport {
        single_in_full,
        full_in_single,
        identical_bases: ctx.gb.to_text(&names) == single.gb.to_text(&names),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RingField {
    F2,
    Q,
}

impl FromStr for RingField {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f2" => Ok(RingField::F2),
            "q" => Ok(RingField::Q),
            other => Err(format!("unknown field '{other}' (expected f2 or q)")),
        }
    }
}

impl fmt::Display for RingField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingField::F2 => "f2",
            RingField::Q => "q",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingCheck {
    Hilbert,
    Pairing,
    Witness,
    S4,
    Chain,
}

impl RingCheck {
    pub const ALL: [RingCheck; 5] =
        [RingCheck::Hilbert, RingCheck::Pairing, RingCheck::Witness, RingCheck::S4, RingCheck::Chain];
}

impl FromStr for RingCheck {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "hilbert" => Ok(RingCheck::Hilbert),
            "pairing" => Ok(RingCheck::Pairing),
            "witness" => Ok(RingCheck::Witness),
            "s4" => Ok(RingCheck::S4),
            "chain" => Ok(RingCheck::Chain),
            other => Err(format!("unknown ring check '{other}'")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RingOptions {
    pub field: RingField,
    pub checks: BTreeSet<RingCheck>,
    pub gb: GbOptions,
    /// Also report the Hilbert function of the base relations alone.
    pub probe_base: bool,
}

impl Default for RingOptions {
    fn default() -> Self {
        RingOptions {
            field: RingField::F2,
            checks: RingCheck::ALL.into_iter().collect(),
            gb: GbOptions::default(),
            probe_base: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PresentationSummary {
    pub generators: usize,
    pub family_i: usize,
    pub family_ii: usize,
    pub family_iii: usize,
    pub family_iv: usize,
    pub supplementary: Vec<String>,
    pub rank_q: usize,
    pub rank_f2: usize,
    pub survivors: usize,
    pub substitution: Vec<(String, String)>,
}

impl PresentationSummary {
    pub fn of(full: &Presentation, e: &Elimination) -> PresentationSummary {
        let names = full.names();
        let reduced_names = e.reduced.names();
        PresentationSummary {
            generators: full.nvars(),
            family_i: full.family_count(Family::I),
            family_ii: full.family_count(Family::II),
            family_iii: full.family_count(Family::III),
            family_iv: full.family_count(Family::IV),
            supplementary: full
                .relations()
                .iter()
                .filter(|r| r.supplementary)
                .map(|r| r.poly.format(&Rationals, &names))
                .collect(),
            rank_q: e.rank_q,
            rank_f2: e.rank_f2,
            survivors: e.reduced.nvars(),
            substitution: e
                .substitution
                .iter()
                .map(|(v, p)| (v.to_string(), p.format(&Rationals, &reduced_names)))
                .collect(),
        }
    }
}

/// Hilbert function of the base relations alone, through degree 13.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BaseProbe {
    pub dims: Vec<usize>,
    pub artinian_by_13: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RingReport {
    pub field: RingField,
    pub presentation: PresentationSummary,
    pub base_only: Option<BaseProbe>,
    pub basis_size: usize,
    pub hilbert: HilbertFunction,
    pub expected_hilbert: Vec<i64>,
    pub hilbert_matches: bool,
    pub pairing_ranks: Option<Vec<usize>>,
    pub pairing_full: Option<bool>,
    pub witness: Option<WitnessReport>,
    pub s4: Option<S4Report>,
    pub chain: Option<ChainReport>,
}

impl RingReport {
    pub fn passed(&self) -> bool {
        self.hilbert_matches
            && self.pairing_full != Some(false)
            && self.witness.as_ref().map_or(true, |w| w.nonzero && w.annihilated_by_generators && w.transposed_nonzero)
            && self.s4.as_ref().map_or(true, |s| s.stable())
            && self.chain.as_ref().map_or(true, |c| c.equal())
    }
}

/// Runs the selected checks against the completed presentation.
pub fn run_ring_checks(opts: &RingOptions, expected: &[i64]) -> Result<(RingReport, Vec<(String, f64)>), CheckError> {
    match opts.field {
        RingField::F2 => run_with(&Fp::f2(), opts, expected),
        RingField::Q => run_with(&Rationals, opts, expected),
    }
}

fn run_with<F: Field>(
    f: &F,
    opts: &RingOptions,
    expected: &[i64],
) -> Result<(RingReport, Vec<(String, f64)>), CheckError> {
    let mut timings = Vec::new();
    let full = build_completed_presentation();
    let ctx = RingContext::build(f, full, &opts.gb)?;
    timings.push(("groebner".to_string(), ctx.seconds));
    let hilbert = hilbert_function(&ctx.gb, TOP_DEGREE)?;
    let hilbert_matches = hilbert.next == 0
        && hilbert.dims.len() == expected.len()
        && hilbert.dims.iter().zip(expected).all(|(a, b)| *a as i64 == *b);

    let base_only = if opts.probe_base {
        let t = Instant::now();
        let base = RingContext::build(f, build_presentation(), &opts.gb)?;
        let dims: Vec<usize> =
            (0..=TOP_DEGREE + 1).map(|d| base.gb.standard_monomials(d).map(|s| s.len())).collect::<Result<_, _>>()?;
        timings.push(("base_probe".to_string(), t.elapsed().as_secs_f64()));
        Some(BaseProbe { artinian_by_13: dims[TOP_DEGREE as usize + 1] == 0, dims })
    } else {
        None
    };

    let mut pairing_ranks = None;
    let mut pairing_full = None;
    if opts.checks.contains(&RingCheck::Pairing) {
        let t = Instant::now();
        if let Some(ranks) = pairing_ranks_if_prime(&ctx)? {
            pairing_full = Some(ranks.iter().zip(&hilbert.dims).all(|(r, d)| r == d));
            pairing_ranks = Some(ranks);
            timings.push(("pairing".to_string(), t.elapsed().as_secs_f64()));
        }
    }
    let witness = if opts.checks.contains(&RingCheck::Witness) {
        let t = Instant::now();
        let w = socle_witness(&ctx)?;
        timings.push(("witness".to_string(), t.elapsed().as_secs_f64()));
        Some(w)
    } else {
        None
    };
    let s4 = if opts.checks.contains(&RingCheck::S4) {
        let t = Instant::now();
        let r = s4_stability_check(&ctx, &Perm::all())?;
        timings.push(("s4".to_string(), t.elapsed().as_secs_f64()));
        Some(r)
    } else {
        None
    };
    let chain = if opts.checks.contains(&RingCheck::Chain) {
        let t = Instant::now();
        let r = single_chain_equivalence(&ctx, &opts.gb)?;
        timings.push(("chain".to_string(), t.elapsed().as_secs_f64()));
        Some(r)
    } else {
        None
    };
    let report = RingReport {
        field: opts.field,
        presentation: PresentationSummary::of(&ctx.full, &ctx.elimination),
        base_only,
        basis_size: ctx.gb.len(),
        hilbert,
        expected_hilbert: expected.to_vec(),
        hilbert_matches,
        pairing_ranks,
        pairing_full,
        witness,
        s4,
        chain,
    };
    Ok((report, timings))
}

/// Pairing ranks in every degree; only available over prime fields.
fn pairing_ranks_if_prime<F: Field>(ctx: &RingContext<F>) -> Result<Option<Vec<usize>>, CheckError> {
    let any: &dyn std::any::Any = &ctx.gb;
    let Some(gb) = any.downcast_ref::<GroebnerBasis<Fp>>() else {
        return Ok(None);
    };
    let ring = QuotientRing::new(gb, TOP_DEGREE)?;
    let ranks = (0..=TOP_DEGREE).map(|i| pairing_rank(&ring, i)).collect::<Result<_, _>>()?;
    Ok(Some(ranks))
}
