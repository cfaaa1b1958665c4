//! Monotonicity scans, the Rouquier multiplicity table and batch identity
//! suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterMatrix, ElementId, GeneratorSet, GroupTable};
use crate::error::{Error, Result};
use crate::hecke::{kl_basis_by_solve, BarTable, HeckeElt, KlTable};
use crate::laurent::LaurentPoly;
use crate::parabolic::{check_soergel_identification, Flavor, ParabolicContext, ParabolicKlTable};

/// A triple `z ≤ y ≤ x` where `lhs ⪯ rhs` fails. The coefficient of
/// `rhs - lhs` at `witness_exponent` is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub z: ElementId,
    pub y: ElementId,
    pub x: ElementId,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
    pub witness_exponent: i32,
}

/// Result of one scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub triples_checked: u64,
    pub violations: Vec<Violation>,
}

/// Walks every triple `z ≤ y ≤ x` with all three in `domain`, and tests
/// `lhs(z, y, x) ⪯ v^shift(z, y, x) · base(z, y, x)`.
///
/// Parallel over `x`; results are concatenated in the order of `domain`,
/// then `y`, then `z`, so the output does not depend on the thread count.
fn scan_triples<L, B, S>(group: &GroupTable, domain: &[ElementId], lhs: L, base: B, shift: S) -> Result<ScanOutcome>
where
    L: Fn(ElementId, ElementId, ElementId) -> Option<LaurentPoly> + Sync,
    B: Fn(ElementId, ElementId, ElementId) -> Option<LaurentPoly> + Sync,
    S: Fn(ElementId, ElementId, ElementId) -> i32 + Sync,
{
    let in_domain = {
        let mut mask = vec![false; group.len()];
        for &x in domain {
            mask[x.index()] = true;
        }
        mask
    };
    let per_x: Vec<Result<(u64, Vec<Violation>)>> = domain
        .par_iter()
        .map(|&x| {
            let mut count = 0u64;
            let mut found = Vec::new();
            let below: Vec<ElementId> = group
                .lower_interval(x)
                .into_iter()
                .filter(|y| in_domain[y.index()])
                .collect();
            for &y in &below {
                for &z in below.iter().take_while(|&&z| z <= y) {
                    if !group.bruhat_leq(z, y) {
                        continue;
                    }
                    count += 1;
                    let l = lhs(z, y, x).unwrap_or_default();
                    let b = base(z, y, x).unwrap_or_default();
                    let k = shift(z, y, x);
                    if let Some(w) = l.first_excess_shifted(&b, k) {
                        found.push(Violation {
                            z,
                            y,
                            x,
                            lhs: l,
                            rhs: b.shift(k)?,
                            witness_exponent: w,
                        });
                    }
                }
            }
            Ok((count, found))
        })
        .collect();
    let mut out = ScanOutcome {
        triples_checked: 0,
        violations: Vec::new(),
    };
    for r in per_x {
        let (count, found) = r?;
        out.triples_checked += count;
        out.violations.extend(found);
    }
    Ok(out)
}

fn length_gap(group: &GroupTable, a: ElementId, b: ElementId) -> i32 {
    group.length(a) as i32 - group.length(b) as i32
}

/// `h^{z,y} ⪯ v^{ℓ(y)-ℓ(x)} h^{z,x}` for all `z ≤ y ≤ x`.
pub fn scan_monotonicity_inverse(table: &KlTable) -> Result<ScanOutcome> {
    let g = table.group();
    let domain: Vec<ElementId> = g.elements().collect();
    scan_triples(
        g,
        &domain,
        |z, y, _| table.inverse_kl_poly_ref(z, y).cloned(),
        |z, _, x| table.inverse_kl_poly_ref(z, x).cloned(),
        |_, y, x| length_gap(g, y, x),
    )
}

/// `h_{y,x} ⪯ v^{ℓ(z)-ℓ(y)} h_{z,x}` for all `z ≤ y ≤ x`.
pub fn scan_monotonicity_classical(table: &KlTable) -> Result<ScanOutcome> {
    let g = table.group();
    let domain: Vec<ElementId> = g.elements().collect();
    scan_triples(
        g,
        &domain,
        |_, y, x| table.kl_poly_ref(y, x).cloned(),
        |z, _, x| table.kl_poly_ref(z, x).cloned(),
        |z, y, _| length_gap(g, z, y),
    )
}

fn parabolic_inverse_scan(table: &ParabolicKlTable, want: Flavor) -> Result<ScanOutcome> {
    if table.flavor() != want {
        return Err(Error::FlavorMismatch {
            expected: want.name(),
            found: table.flavor().name(),
        });
    }
    let g = table.context().group();
    scan_triples(
        g,
        table.context().reps(),
        |z, y, _| table.inverse_ref(z, y).cloned(),
        |z, _, x| table.inverse_ref(z, x).cloned(),
        |_, y, x| length_gap(g, y, x),
    )
}

/// `n^{z,y} ⪯ v^{ℓ(y)-ℓ(x)} n^{z,x}` for all `z ≤ y ≤ x` in `^I W`.
pub fn scan_monotonicity_antispherical(table: &ParabolicKlTable) -> Result<ScanOutcome> {
    parabolic_inverse_scan(table, Flavor::Antispherical)
}

/// The same comparison for `m^{z,y}`; violations are expected here.
pub fn scan_monotonicity_spherical(table: &ParabolicKlTable) -> Result<ScanOutcome> {
    parabolic_inverse_scan(table, Flavor::Spherical)
}

/// What the spherical scan is required to report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SphericalExpectation {
    /// `I = ∅`: the module is the regular one and nothing may fail.
    Empty,
    /// `W` of type `A_n` and `I` of type `A_{n-1}`: `^I W` is a chain and
    /// each listed consecutive triple `(z, y, x)` must fail.
    Chain(Vec<(ElementId, ElementId, ElementId)>),
    /// No claim either way.
    Unconstrained,
}

pub fn spherical_expectation(ctx: &ParabolicContext) -> SphericalExpectation {
    let group = ctx.group();
    let subset = ctx.subset();
    if subset.is_empty() {
        return SphericalExpectation::Empty;
    }
    let Some(path) = group.matrix().type_a_path() else {
        return SphericalExpectation::Unconstrained;
    };
    if !group.is_complete() || path.len() < 2 {
        return SphericalExpectation::Unconstrained;
    }
    let all = GeneratorSet::all(group.rank());
    let ends = [path[0], path[path.len() - 1]];
    let maximal = ends
        .iter()
        .any(|&s| GeneratorSet::from_bits(all.bits() & !(1u64 << s)) == subset);
    if !maximal {
        return SphericalExpectation::Unconstrained;
    }
    let reps = ctx.reps();
    SphericalExpectation::Chain(reps.windows(3).map(|w| (w[0], w[1], w[2])).collect())
}

/// Graded multiplicities `m^i_{y,Δx}` of the Rouquier complex of `x`,
/// read off from `h^{y,x}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouquierTable {
    pub x: ElementId,
    pub mult: BTreeMap<(ElementId, i32), u64>,
}

pub fn rouquier_multiplicities(table: &KlTable, x: ElementId) -> Result<RouquierTable> {
    let group = table.group();
    if x.index() >= group.len() {
        return Err(Error::Invariant(format!("element id {} out of range", x.0)));
    }
    let mut mult = BTreeMap::new();
    for (y, p) in table.inverse_column(x).terms() {
        for (i, c) in p.terms() {
            let m = u64::try_from(c).map_err(|_| {
                Error::Invariant(format!(
                    "negative multiplicity {c} at degree {i} for y={}, x={}",
                    group.display(y),
                    group.display(x)
                ))
            })?;
            mult.insert((y, i), m);
        }
    }
    let out = RouquierTable { x, mult };
    if let Some((y, i)) = out.parity_support_failures(group).into_iter().next() {
        return Err(Error::Invariant(format!(
            "multiplicity in degree {i} for y={}, x={} breaks parity or support",
            group.display(y),
            group.display(x)
        )));
    }
    Ok(out)
}

impl RouquierTable {
    /// `Σ_i m^i_{y,Δx} v^i`.
    pub fn polynomial(&self, y: ElementId) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(_, i), &m) in self.mult.range((y, i32::MIN)..=(y, i32::MAX)) {
            p.add_term(i, m as i64).expect("multiplicities fit in i64");
        }
        p
    }

    /// Entries with `y ≰ x` or `i ≢ ℓ(x) - ℓ(y) (mod 2)`.
    pub fn parity_support_failures(&self, group: &GroupTable) -> Vec<(ElementId, i32)> {
        self.mult
            .keys()
            .filter(|&&(y, i)| {
                let parity = (group.length(self.x) + group.length(y)) as i32;
                !group.bruhat_leq(y, self.x) || (i - parity).rem_euclid(2) != 0
            })
            .copied()
            .collect()
    }

    /// `Σ_y Σ_i (-1)^i m^i_{y,Δx} v^i b_y`, expanded in the standard basis.
    pub fn grothendieck_sum(&self, table: &KlTable) -> Result<HeckeElt> {
        let mut out = HeckeElt::zero();
        for (&(y, i), &m) in &self.mult {
            let c = i64::try_from(m).map_err(|_| Error::Overflow)?;
            let sign = if i.rem_euclid(2) == 0 { c } else { -c };
            out.add_multiple(table.kl_basis_element(y), &LaurentPoly::monomial(sign, i))?;
        }
        Ok(out)
    }
}

/// What a check is supposed to find.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Pass,
    Violations,
    Informational,
}

/// One reported failure, with elements written as words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    pub y: String,
    pub x: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs: Option<LaurentPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs: Option<LaurentPoly>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_exponent: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Finding {
    pub fn from_violation(group: &GroupTable, v: &Violation) -> Self {
        Finding {
            z: Some(group.display(v.z)),
            y: group.display(v.y),
            x: group.display(v.x),
            lhs: Some(v.lhs.clone()),
            rhs: Some(v.rhs.clone()),
            witness_exponent: Some(v.witness_exponent),
            note: None,
        }
    }

    fn pair(group: &GroupTable, y: ElementId, x: ElementId, note: impl Into<String>) -> Self {
        Finding {
            z: None,
            y: group.display(y),
            x: group.display(x),
            lhs: None,
            rhs: None,
            witness_exponent: None,
            note: Some(note.into()),
        }
    }
}

/// Findings kept per check; `violation_count` has the full total.
pub const MAX_FINDINGS: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub group: String,
    #[serde(rename = "I")]
    pub subset: Option<Vec<usize>>,
    pub flavor: Option<Flavor>,
    pub cap: Option<usize>,
    pub pairs_checked: u64,
    pub expectation: Expectation,
    pub passed: bool,
    pub violation_count: usize,
    pub violations: Vec<Finding>,
    /// Mandated violations that the scan did not report.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub missing: Vec<Finding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    fn new(check: &str, group: &str, cap: Option<usize>) -> Self {
        CheckRecord {
            check: check.to_string(),
            group: group.to_string(),
            subset: None,
            flavor: None,
            cap,
            pairs_checked: 0,
            expectation: Expectation::Pass,
            passed: true,
            violation_count: 0,
            violations: Vec::new(),
            missing: Vec::new(),
            error: None,
        }
    }

    fn parabolic(mut self, subset: GeneratorSet, flavor: Flavor) -> Self {
        self.subset = Some(subset.to_one_based());
        self.flavor = Some(flavor);
        self
    }

    fn push(&mut self, f: Finding) {
        self.violation_count += 1;
        if self.violations.len() < MAX_FINDINGS {
            self.violations.push(f);
        }
        if self.expectation == Expectation::Pass {
            self.passed = false;
        }
    }

    fn fail_with(mut self, e: &Error) -> Self {
        self.error = Some(e.to_string());
        self.passed = false;
        self
    }

    /// One line summary.
    pub fn summary_line(&self) -> String {
        let subset = match &self.subset {
            None => String::new(),
            Some(s) => format!(" I=[{}]", s.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")),
        };
        let flavor = self.flavor.map(|f| format!(" {f}")).unwrap_or_default();
        let cap = self.cap.map(|c| format!(" cap={c}")).unwrap_or_default();
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{status} {} {}{subset}{flavor}{cap} checked={} violations={}",
            self.check, self.group, self.pairs_checked, self.violation_count
        );
        match self.expectation {
            Expectation::Violations if self.violation_count > 0 => line.push_str(" (EXPECTED)"),
            Expectation::Informational => line.push_str(" (informational)"),
            _ => {}
        }
        if !self.missing.is_empty() {
            line.push_str(&format!(" missing={}", self.missing.len()));
        }
        if let Some(e) = &self.error {
            line.push_str(&format!(" error: {e}"));
        }
        line
    }
}

/// The outcome of a suite run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub group: String,
    pub cap: Option<usize>,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl SuiteReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.summary_line());
            out.push('\n');
            for f in c.violations.iter().chain(&c.missing) {
                out.push_str("  ");
                out.push_str(&finding_line(f));
                out.push('\n');
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} {}: {} checks, {} failed\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.group,
            self.checks.len(),
            failed
        ));
        out
    }
}

pub fn finding_line(f: &Finding) -> String {
    let mut s = match &f.z {
        Some(z) => format!("z={z} y={} x={}", f.y, f.x),
        None => format!("y={} x={}", f.y, f.x),
    };
    if let (Some(l), Some(r)) = (&f.lhs, &f.rhs) {
        s.push_str(&format!(" lhs={l} rhs={r}"));
    }
    if let Some(w) = f.witness_exponent {
        s.push_str(&format!(" witness=v^{w}"));
    }
    if let Some(n) = &f.note {
        s.push_str(&format!(" {n}"));
    }
    s
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    /// A group spec accepted by [`CoxeterMatrix::parse_spec`].
    pub group: String,
    pub subsets: Vec<GeneratorSet>,
    pub cap: Option<usize>,
    pub max_elements: usize,
    /// Include the four monotonicity scans.
    pub scans: bool,
}

impl SuiteConfig {
    pub fn new(group: impl Into<String>) -> Self {
        SuiteConfig {
            group: group.into(),
            subsets: Vec::new(),
            cap: None,
            max_elements: crate::coxeter::DEFAULT_MAX_ELEMENTS,
            scans: true,
        }
    }

    pub fn subsets(mut self, subsets: Vec<GeneratorSet>) -> Self {
        self.subsets = subsets;
        self
    }

    pub fn cap(mut self, cap: Option<usize>) -> Self {
        self.cap = cap;
        self
    }

    pub fn scans(mut self, on: bool) -> Self {
        self.scans = on;
        self
    }
}

/// Identity checks only.
pub fn run_identity_suite(config: &SuiteConfig) -> SuiteReport {
    run_suite(&config.clone().scans(false))
}

/// Identity checks, and the monotonicity scans when `config.scans` is set.
/// Upstream errors become failed records rather than aborting the run.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    let name = config.group.as_str();
    let mut checks = Vec::new();
    let setup = (|| -> Result<(Arc<GroupTable>, BarTable, KlTable)> {
        let matrix = CoxeterMatrix::parse_spec(name)?;
        let group = Arc::new(GroupTable::enumerate_with_limit(
            matrix,
            config.cap,
            config.max_elements,
        )?);
        let bars = BarTable::build(group.clone())?;
        let kl = KlTable::build(group.clone())?;
        Ok((group, bars, kl))
    })();
    let (group, bars, kl) = match setup {
        Ok(t) => t,
        Err(e) => {
            checks.push(CheckRecord::new("setup", name, config.cap).fail_with(&e));
            return finish(config, checks);
        }
    };
    let g = &*group;
    let cap = config.cap;

    checks.push(check_positivity(&kl, name, cap));
    checks.push(check_pairs(&kl, name, cap, "parity", |y, x| {
        Ok((!kl.check_parity(y, x)).then(|| format!("h^ = {} has the wrong parity", kl.inverse_kl_poly(y, x))))
    }));
    checks.push(check_pairs(&kl, name, cap, "inversion", |y, x| {
        Ok((!kl.check_inversion_identity(y, x)?).then(|| "Kronecker sum fails".to_string()))
    }));
    checks.push(check_elements(g, name, cap, "bar-invariance", |x| {
        let b = kl.kl_basis_element(x);
        if bars.bar_element(b)? != *b {
            return Ok(Some("bar(b_x) != b_x".into()));
        }
        if b.coefficient(x) != LaurentPoly::one() || b.support().any(|y| !g.bruhat_leq(y, x)) {
            return Ok(Some("b_x is not unitriangular".into()));
        }
        Ok(None)
    }));
    checks.push(check_elements(g, name, cap, "kl-oracle", |x| {
        let solved = kl_basis_by_solve(&bars, x)?;
        Ok((solved != *kl.kl_basis_element(x)).then(|| "recursion and solve disagree".into()))
    }));
    checks.push(check_elements(g, name, cap, "rouquier", |x| {
        let r = rouquier_multiplicities(&kl, x)?;
        for (y, _) in kl.inverse_column(x).terms() {
            if r.polynomial(y) != kl.inverse_kl_poly(y, x) {
                return Ok(Some(format!("multiplicities at {} differ from h^", g.display(y))));
            }
        }
        Ok((r.grothendieck_sum(&kl)? != HeckeElt::delta(x)).then(|| "alternating sum is not delta_x".into()))
    }));
    if config.scans {
        checks.push(scan_record(
            "monotonicity-inverse",
            name,
            cap,
            g,
            scan_monotonicity_inverse(&kl),
        ));
        checks.push(scan_record(
            "monotonicity-classical",
            name,
            cap,
            g,
            scan_monotonicity_classical(&kl),
        ));
    }

    for &subset in &config.subsets {
        for flavor in [Flavor::Antispherical, Flavor::Spherical] {
            let built = ParabolicContext::new(group.clone(), subset, flavor)
                .and_then(|ctx| ParabolicKlTable::build(ctx, &bars));
            let table = match built {
                Ok(t) => t,
                Err(e) => {
                    checks.push(
                        CheckRecord::new("parabolic-setup", name, cap)
                            .parabolic(subset, flavor)
                            .fail_with(&e),
                    );
                    continue;
                }
            };
            checks.extend(parabolic_checks(&table, &kl, &bars, name, cap, config.scans));
        }
    }
    finish(config, checks)
}

fn finish(config: &SuiteConfig, checks: Vec<CheckRecord>) -> SuiteReport {
    SuiteReport {
        group: config.group.clone(),
        cap: config.cap,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn all_pairs(g: &GroupTable) -> Vec<(ElementId, ElementId)> {
    g.elements()
        .flat_map(|x| g.lower_interval(x).into_iter().map(move |y| (y, x)))
        .collect()
}

/// Runs `f` over every comparable pair `y ≤ x` in parallel; `Some(note)`
/// records a failure.
fn check_pairs<F>(kl: &KlTable, name: &str, cap: Option<usize>, check: &str, f: F) -> CheckRecord
where
    F: Fn(ElementId, ElementId) -> Result<Option<String>> + Sync,
{
    let g = kl.group();
    let pairs = all_pairs(g);
    let results: Vec<_> = pairs.par_iter().map(|&(y, x)| f(y, x)).collect();
    collect_pair_results(CheckRecord::new(check, name, cap), g, &pairs, results)
}

fn check_elements<F>(g: &GroupTable, name: &str, cap: Option<usize>, check: &str, f: F) -> CheckRecord
where
    F: Fn(ElementId) -> Result<Option<String>> + Sync,
{
    let pairs: Vec<(ElementId, ElementId)> = g.elements().map(|x| (x, x)).collect();
    let results: Vec<_> = pairs.par_iter().map(|&(_, x)| f(x)).collect();
    collect_pair_results(CheckRecord::new(check, name, cap), g, &pairs, results)
}

fn collect_pair_results(
    mut rec: CheckRecord,
    g: &GroupTable,
    pairs: &[(ElementId, ElementId)],
    results: Vec<Result<Option<String>>>,
) -> CheckRecord {
    rec.pairs_checked = pairs.len() as u64;
    for (&(y, x), r) in pairs.iter().zip(results) {
        match r {
            Ok(None) => {}
            Ok(Some(note)) => rec.push(Finding::pair(g, y, x, note)),
            Err(e) => return rec.fail_with(&e),
        }
    }
    rec
}

fn check_positivity(kl: &KlTable, name: &str, cap: Option<usize>) -> CheckRecord {
    check_pairs(kl, name, cap, "positivity", |y, x| {
        let h = kl.kl_poly(y, x);
        if !h.is_nonnegative_polynomial() {
            return Ok(Some(format!("h = {h} is not in Z>=0[v]")));
        }
        let inv = kl.inverse_kl_poly(y, x);
        if !inv.is_nonnegative_polynomial() {
            return Ok(Some(format!("h^ = {inv} is not in Z>=0[v]")));
        }
        let mu = kl.mu(y, x);
        Ok((mu < 0).then(|| format!("mu = {mu} is negative")))
    })
}

fn scan_record(
    check: &str,
    name: &str,
    cap: Option<usize>,
    g: &GroupTable,
    outcome: Result<ScanOutcome>,
) -> CheckRecord {
    let mut rec = CheckRecord::new(check, name, cap);
    match outcome {
        Ok(o) => {
            rec.pairs_checked = o.triples_checked;
            for v in &o.violations {
                rec.push(Finding::from_violation(g, v));
            }
            rec
        }
        Err(e) => rec.fail_with(&e),
    }
}

/// The spherical scan judged against [`spherical_expectation`].
pub fn spherical_scan_record(table: &ParabolicKlTable, name: &str, cap: Option<usize>) -> CheckRecord {
    let ctx = table.context();
    let g = ctx.group();
    let expectation = spherical_expectation(ctx);
    let mut rec = CheckRecord::new("monotonicity-spherical", name, cap).parabolic(ctx.subset(), ctx.flavor());
    rec.expectation = match expectation {
        SphericalExpectation::Empty => Expectation::Pass,
        SphericalExpectation::Chain(_) => Expectation::Violations,
        SphericalExpectation::Unconstrained => Expectation::Informational,
    };
    let outcome = match scan_monotonicity_spherical(table) {
        Ok(o) => o,
        Err(e) => return rec.fail_with(&e),
    };
    rec.pairs_checked = outcome.triples_checked;
    for v in &outcome.violations {
        rec.push(Finding::from_violation(g, v));
    }
    if let SphericalExpectation::Chain(triples) = expectation {
        for (z, y, x) in triples {
            if !outcome.violations.iter().any(|v| (v.z, v.y, v.x) == (z, y, x)) {
                rec.missing.push(Finding {
                    z: Some(g.display(z)),
                    ..Finding::pair(g, y, x, "expected violation absent")
                });
            }
        }
        rec.passed = rec.missing.is_empty();
    }
    rec
}

fn parabolic_checks(
    table: &ParabolicKlTable,
    kl: &KlTable,
    bars: &BarTable,
    name: &str,
    cap: Option<usize>,
    scans: bool,
) -> Vec<CheckRecord> {
    let ctx = table.context();
    let g = ctx.group();
    let (subset, flavor) = (ctx.subset(), ctx.flavor());
    let new = |check: &str| CheckRecord::new(check, name, cap).parabolic(subset, flavor);
    let reps = ctx.reps();
    let pairs: Vec<(ElementId, ElementId)> = reps
        .iter()
        .flat_map(|&x| reps.iter().filter(move |&&y| g.bruhat_leq(y, x)).map(move |&y| (y, x)))
        .collect();
    let mut out = Vec::new();

    let diag: Vec<(ElementId, ElementId)> = reps.iter().map(|&x| (x, x)).collect();
    let results = diag
        .par_iter()
        .map(|&(_, x)| -> Result<Option<String>> {
            let c = table.parabolic_kl_basis(x)?;
            if ctx.bar_parabolic(c, bars)? != *c {
                return Ok(Some("canonical element is not bar-invariant".into()));
            }
            if c.coefficient(x) != LaurentPoly::one() {
                return Ok(Some("diagonal coefficient is not 1".into()));
            }
            for (y, p) in c.terms() {
                if y != x && (!p.in_v_z_v() || !g.bruhat_leq(y, x)) {
                    return Ok(Some(format!("off-diagonal coefficient {p} at {}", g.display(y))));
                }
            }
            Ok(None)
        })
        .collect();
    out.push(collect_pair_results(new("parabolic-bar-invariance"), g, &diag, results));

    let results = pairs
        .par_iter()
        .map(|&(y, x)| Ok((!table.check_inversion_identity(y, x)?).then(|| "Kronecker sum fails".to_string())))
        .collect();
    out.push(collect_pair_results(new("parabolic-inversion"), g, &pairs, results));

    if flavor == Flavor::Antispherical {
        let mut rec = new("soergel-identification");
        rec.pairs_checked = (reps.len() * reps.len()) as u64;
        match check_soergel_identification(table, kl) {
            Ok(mismatches) => {
                for m in mismatches {
                    rec.push(Finding {
                        lhs: Some(m.parabolic),
                        rhs: Some(m.classical),
                        ..Finding::pair(g, m.z, m.x, "n^ != h^")
                    });
                }
            }
            Err(e) => rec = rec.fail_with(&e),
        }
        out.push(rec);
    }

    if scans {
        out.push(match flavor {
            Flavor::Antispherical => {
                let mut r = scan_record(
                    "monotonicity-antispherical",
                    name,
                    cap,
                    g,
                    scan_monotonicity_antispherical(table),
                );
                r.subset = Some(subset.to_one_based());
                r.flavor = Some(flavor);
                r
            }
            Flavor::Spherical => spherical_scan_record(table, name, cap),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kl(spec: &str) -> KlTable {
        let g = Arc::new(GroupTable::enumerate(CoxeterMatrix::parse_spec(spec).unwrap(), None).unwrap());
        KlTable::build(g).unwrap()
    }

    fn parabolic(kl: &KlTable, subset: &[usize], flavor: Flavor) -> ParabolicKlTable {
        let g = kl.group().clone();
        let bars = BarTable::build(g.clone()).unwrap();
        let ctx = ParabolicContext::new(g, GeneratorSet::from_generators(subset.iter().copied()), flavor).unwrap();
        ParabolicKlTable::build(ctx, &bars).unwrap()
    }

    #[test]
    fn rouquier_small_cases() {
        let t = kl("A2");
        let g = t.group();
        let e = ElementId::IDENTITY;
        let r = rouquier_multiplicities(&t, e).unwrap();
        assert_eq!(r.mult, BTreeMap::from([((e, 0), 1)]));
        let s = g.parse_element("1").unwrap();
        let r = rouquier_multiplicities(&t, s).unwrap();
        assert_eq!(r.mult, BTreeMap::from([((e, 1), 1), ((s, 0), 1)]));
        for x in g.elements() {
            let r = rouquier_multiplicities(&t, x).unwrap();
            assert_eq!(r.grothendieck_sum(&t).unwrap(), HeckeElt::delta(x));
        }
    }

    #[test]
    fn scans_on_a2() {
        let t = kl("A2");
        let inv = scan_monotonicity_inverse(&t).unwrap();
        assert!(inv.violations.is_empty());
        assert!(inv.triples_checked > 0);
        assert!(scan_monotonicity_classical(&t).unwrap().violations.is_empty());
    }

    #[test]
    fn spherical_chain_a2() {
        let t = kl("A2");
        let sph = parabolic(&t, &[0], Flavor::Spherical);
        let g = t.group();
        let chain = match spherical_expectation(sph.context()) {
            SphericalExpectation::Chain(c) => c,
            other => panic!("{other:?}"),
        };
        let want = (
            ElementId::IDENTITY,
            g.parse_element("2").unwrap(),
            g.parse_element("2,1").unwrap(),
        );
        assert_eq!(chain, vec![want]);
        let out = scan_monotonicity_spherical(&sph).unwrap();
        assert!(out.violations.iter().any(|v| (v.z, v.y, v.x) == want));
        let rec = spherical_scan_record(&sph, "A2", None);
        assert!(rec.passed && rec.missing.is_empty());
    }

    #[test]
    fn flavor_mismatch() {
        let t = kl("A2");
        let sph = parabolic(&t, &[0], Flavor::Spherical);
        let anti = parabolic(&t, &[0], Flavor::Antispherical);
        assert!(matches!(
            scan_monotonicity_antispherical(&sph),
            Err(Error::FlavorMismatch { .. })
        ));
        assert!(matches!(
            scan_monotonicity_spherical(&anti),
            Err(Error::FlavorMismatch { .. })
        ));
    }

    #[test]
    fn empty_subset_matches_regular_scan() {
        let t = kl("B2");
        let anti = parabolic(&t, &[], Flavor::Antispherical);
        assert_eq!(
            scan_monotonicity_antispherical(&anti).unwrap(),
            scan_monotonicity_inverse(&t).unwrap()
        );
    }

    #[test]
    fn suite_reports_bad_spec() {
        let r = run_suite(&SuiteConfig::new("Q7"));
        assert!(!r.passed);
        assert_eq!(r.checks[0].check, "setup");
        assert!(r.checks[0].error.is_some());
    }

    #[test]
    fn suite_a2_passes_and_round_trips() {
        let r = run_suite(&SuiteConfig::new("A2").subsets(GeneratorSet::all_subsets(2)));
        assert!(r.passed, "{}", r.to_text());
        let json = serde_json::to_string(&r).unwrap();
        let back: SuiteReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
