//! Seeded verification campaigns: random presentations, one named check set
//! per campaign, and deterministic JSON reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{CheckOutcome, CheckReport, CheckViolation};
use crate::error::{input_err, Error, Result};
use crate::fim::{degrees_up_to, hom_size, MultiIndex};
use crate::functors::{
    bold_functors, church_lemma_check, derived_d, hor_ver_homology, kd_functors, restrict_coords, split_h0, Side,
    Split,
};
use crate::homology::{
    degree, free_resolution, h0, homology_with, tilde_along, tilde_subspace, tor_oracle, Engine, HomologyTable,
    LiftStrategy, OracleBudget,
};
use crate::linalg::{Field, FieldConfig, PrimeField, Rationals};
use crate::module::{free_module, from_presentation, random_presentation, validate, PresentationFile, Presentation, TruncatedModule, Window};
use crate::rho::{RhoEngine, RhoValue};

/// Version tag of the module and presentation JSON formats.
pub const MODULE_FORMAT: &str = "fimreg-json-1";

pub const CAMPAIGNS: &[&str] = &[
    "ce-m1",
    "main-bound",
    "weak-bound",
    "four-term",
    "two-row",
    "church",
    "kv-bounds",
    "degS-degD",
    "split-h0",
    "restrict-free",
    "lift-strategies",
    "window-stability",
    "compare-oracle",
];

/// Checks that run on a single module (the `functors --check` set).
pub const MODULE_CHECKS: &[&str] = &["four-term", "two-row", "church", "split-h0", "restrict-free"];

fn default_engine() -> String {
    "resolution".to_string()
}
fn default_gens() -> usize {
    3
}
fn default_rels() -> usize {
    2
}
fn default_max_dim() -> usize {
    20_000
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub campaign: String,
    pub m: usize,
    pub d: i64,
    pub r: i64,
    #[serde(rename = "N")]
    pub top: usize,
    #[serde(rename = "I")]
    pub max_i: usize,
    pub count: usize,
    pub seed: u64,
    #[serde(default)]
    pub field: FieldConfig,
    #[serde(default = "default_engine")]
    pub engine: String,
    #[serde(default = "default_gens")]
    pub generators: usize,
    #[serde(default = "default_rels")]
    pub relations: usize,
    /// Instances whose module exceeds this total dimension are skipped.
    #[serde(default = "default_max_dim")]
    pub max_total_dim: usize,
    #[serde(default)]
    pub oracle_max_morphisms: Option<usize>,
    #[serde(default)]
    pub oracle_max_entries: Option<usize>,
}

impl CampaignConfig {
    pub fn new(campaign: &str, m: usize, d: i64, r: i64, top: usize, max_i: usize, count: usize, seed: u64) -> Self {
        CampaignConfig {
            campaign: campaign.to_string(),
            m,
            d,
            r,
            top,
            max_i,
            count,
            seed,
            field: FieldConfig::default(),
            engine: default_engine(),
            generators: default_gens(),
            relations: default_rels(),
            max_total_dim: default_max_dim(),
            oracle_max_morphisms: None,
            oracle_max_entries: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| input_err!("campaign config: {e}"))
    }

    pub fn check(&self) -> Result<()> {
        if !CAMPAIGNS.contains(&self.campaign.as_str()) {
            return Err(input_err!("unknown campaign '{}' (known: {})", self.campaign, CAMPAIGNS.join(", ")));
        }
        if self.m == 0 {
            return Err(input_err!("m must be at least 1"));
        }
        if self.d < -1 || self.r < -1 {
            return Err(input_err!("d and r must be at least -1"));
        }
        if (self.top as i64) < self.d.max(self.r) {
            return Err(input_err!("N = {} must be at least max(d, r) = {}", self.top, self.d.max(self.r)));
        }
        if self.max_i < 1 {
            return Err(input_err!("I must be at least 1"));
        }
        if self.count < 1 {
            return Err(input_err!("count must be at least 1"));
        }
        self.field.check()?;
        Engine::parse(&self.engine)?;
        let needs_shift = ["four-term", "two-row", "church", "kv-bounds", "degS-degD"];
        if needs_shift.contains(&self.campaign.as_str()) && self.top == 0 {
            return Err(input_err!("campaign {} needs N >= 1", self.campaign));
        }
        match self.campaign.as_str() {
            "ce-m1" if self.m != 1 => Err(input_err!("ce-m1 runs on m = 1")),
            "weak-bound" | "split-h0" | "restrict-free" if self.m < 2 => {
                Err(input_err!("{} needs m >= 2", self.campaign))
            }
            "kv-bounds" if self.m < 2 || self.d < 0 => Err(input_err!("kv-bounds needs m >= 2 and d >= 0")),
            _ => Ok(()),
        }
    }

    fn engine(&self) -> Engine {
        Engine::parse(&self.engine).expect("checked engine")
    }

    fn budget(&self) -> OracleBudget {
        let base = OracleBudget::default();
        OracleBudget {
            max_morphisms: self.oracle_max_morphisms.unwrap_or(base.max_morphisms),
            max_entries: self.oracle_max_entries.unwrap_or(base.max_entries),
        }
    }

    /// Seed of the `k`-th instance.
    pub fn instance_seed(&self, k: usize) -> u64 {
        self.seed.wrapping_add(k as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Environment {
    pub field: String,
    pub seed: u64,
    pub module_format: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub seed: u64,
    pub total_dim: usize,
    pub skipped: Option<String>,
    pub nonzero: bool,
    /// Some `H_i`, `i >= 1`, is nonzero in the window.
    pub higher_homology: bool,
    pub t: Vec<i64>,
    pub censored: Vec<bool>,
    pub checks: Vec<CheckReport>,
    /// The presentation, attached when a check fails.
    pub instance: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub skipped: usize,
    pub nonzero: usize,
    pub with_higher_homology: usize,
    pub degrees_tested: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub config: CampaignConfig,
    pub environment: Environment,
    /// The bound being tested, when the campaign has one.
    pub bound: Option<String>,
    /// For bound campaigns: no degree of the window lies above the bound,
    /// so the check cannot fail.
    pub vacuous: Option<bool>,
    pub instances: Vec<InstanceResult>,
    pub summary: Summary,
    pub verdict: String,
}

impl CampaignReport {
    /// No violations. A vacuous bound campaign has none but proves nothing;
    /// see [`CampaignReport::vacuous`].
    pub fn passed(&self) -> bool {
        self.verdict != "fail"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per instance plus the verdict.
    pub fn render(&self) -> String {
        let mut out = format!(
            "campaign {} (m={}, d={}, r={}, N={}, I={}, field {}, engine {})\n",
            self.campaign,
            self.config.m,
            self.config.d,
            self.config.r,
            self.config.top,
            self.config.max_i,
            self.environment.field,
            self.config.engine
        );
        if let Some(b) = &self.bound {
            out.push_str(&format!("bound: {b}\n"));
        }
        if let Some(v) = self.vacuous {
            out.push_str(&format!("vacuous in window: {v}\n"));
        }
        for inst in &self.instances {
            let status = match &inst.skipped {
                Some(why) => format!("skipped ({why})"),
                None => {
                    let bad: usize = inst.checks.iter().map(|c| c.violations.len()).sum();
                    if bad == 0 {
                        "ok".to_string()
                    } else {
                        format!("{bad} violations")
                    }
                }
            };
            out.push_str(&format!("  seed {:>6}  dim {:>6}  t {:?}  {status}\n", inst.seed, inst.total_dim, inst.t));
            for c in &inst.checks {
                for v in &c.violations {
                    out.push_str(&format!(
                        "    {} at {:?} i={:?} {}: {} vs {}\n",
                        c.check, v.degree, v.index, v.relation, v.lhs, v.rhs
                    ));
                }
            }
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} instances ({} skipped, {} nonzero, {} with higher homology), {} degrees tested, {} violations: {}\n",
            s.instances, s.skipped, s.nonzero, s.with_higher_homology, s.degrees_tested, s.violations, self.verdict
        ));
        out
    }
}

/// Integer bounds for the bound campaigns; `None` means above any window.
#[derive(Clone, Debug, Default)]
struct Bounds {
    label: Option<String>,
    /// `t_i <= per_index[i]`.
    per_index: Vec<Option<i64>>,
    prime: Option<i64>,
    dprime: Option<i64>,
}

fn as_i64(v: &RhoValue) -> Option<i64> {
    v.to_i64()
}

fn bounds_for(cfg: &CampaignConfig) -> Result<Bounds> {
    let (m, d, r, top_i) = (cfg.m, cfg.d, cfg.r, cfg.max_i as i64);
    let mut e = RhoEngine::new();
    let mut b = Bounds::default();
    match cfg.campaign.as_str() {
        "ce-m1" => {
            b.per_index = (0..=top_i).map(|i| Some(if i == 0 { d } else { i + d + r - 1 })).collect();
            b.label = Some(format!("t_0 <= {d}, t_i <= i + {}", d + r - 1));
        }
        "main-bound" => {
            let rho = e.rho(m, d, r)?;
            b.per_index = (0..=top_i).map(|i| as_i64(&rho).map(|x| x + i)).collect();
            b.label = Some(format!("t_i <= i + rho_{m}({d}, {r}) = i + {}", rho.short()));
        }
        "weak-bound" => {
            let a = e.rho(1, d, r)?;
            let c = e.rho(m - 1, d, r)?;
            let s = a.add(&c);
            b.per_index = (0..=top_i).map(|i| as_i64(&s).map(|x| x + 2 * i)).collect();
            b.label = Some(format!("t_i <= 2i + rho_1({d}, {r}) + rho_{}({d}, {r}) = 2i + {}", m - 1, s.short()));
        }
        "kv-bounds" => {
            let p1 = e.rho_prime(m, d, r)?;
            let p2 = e.rho_dprime(m, d, r)?;
            b.prime = as_i64(&p1);
            b.dprime = as_i64(&p2);
            b.label = Some(format!("t_0(KV) <= {}, t_1(KV) <= {}", p1.short(), p2.short()));
        }
        "degS-degD" => {
            b.label = Some(format!("t_0(DV) <= {}, t_1(DV) <= {r}, deg V <= 1 + deg ΣV", d - 1));
        }
        _ => {}
    }
    Ok(b)
}

/// Zero checks for `H_i(n)` above per-index bounds. Every in-window degree
/// strictly above a bound counts as tested.
fn bound_outcome(table: &HomologyTable, bounds: &[Option<i64>], what: &str) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    for (i, bound) in bounds.iter().enumerate().take(table.max_i() + 1) {
        let Some(bound) = bound else { continue };
        for (k, n) in table.degrees().iter().enumerate() {
            if (n.total() as i64) <= *bound {
                continue;
            }
            out.degrees_tested += 1;
            let x = table.row(i)[k];
            if x != 0 {
                out.violations.push(CheckViolation::new(
                    n,
                    Some(i),
                    &format!("{what} vanishes above {bound}"),
                    format!("dim = {x}"),
                    "0",
                ));
            }
        }
    }
    out
}

/// Whether the bounds leave any in-window degree to test.
fn vacuous(bounds: &[Option<i64>], top: usize) -> bool {
    bounds.iter().all(|b| b.is_none_or(|x| x >= top as i64))
}

struct Ctx<'a, F: Field> {
    cfg: &'a CampaignConfig,
    bounds: &'a Bounds,
    v: &'a TruncatedModule<F>,
    pres: Option<&'a Presentation<F>>,
    table: &'a HomologyTable,
    seed: u64,
}

fn four_term<F: Field>(v: &TruncatedModule<F>) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let bold = bold_functors(v)?;
    for part in &bold.parts {
        out.degrees_tested += part.v.window().degrees().len();
        for x in part.violations() {
            let n = &x.degree;
            let lhs = format!(
                "dims K={} V={} Σ={} D={}",
                part.k.dim(n),
                part.v.dim(n),
                part.sigma.dim(n),
                part.d.dim(n)
            );
            out.violations.push(CheckViolation::new(n, None, &format!("coordinate {}: {}", part.coord, x.relation), lhs, "exact and natural"));
        }
        for x in validate(&part.k).into_iter().chain(validate(&part.d)) {
            out.violations.push(CheckViolation::new(&x.degree, None, &format!("coordinate {}: induced module fails {}", part.coord, x.relation), "violated", "holds"));
        }
    }
    for n in bold.dimension_violations() {
        let v0 = &bold.parts[0].v;
        out.violations.push(CheckViolation::new(
            &n,
            None,
            "dim KV + dim ΣV = m dim V + dim DV",
            bold.k.dim(&n) + bold.sigma.dim(&n),
            v0.window().m() * v0.dim(&n) + bold.d.dim(&n),
        ));
    }
    Ok(out)
}

fn two_row<F: Field>(v: &TruncatedModule<F>, table: &HomologyTable, engine: Engine) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let max_p = table.max_i();
    for i in 0..v.m() {
        let data = kd_functors(v, i)?;
        let ld = derived_d(v, i, 3)?;
        let hd = homology_with(&data.d, max_p, engine)?;
        let hk = if max_p >= 2 { Some(homology_with(&data.k, max_p - 2, engine)?) } else { None };
        for (k, n) in ld.degrees().iter().enumerate() {
            out.degrees_tested += 1;
            let (l1, kd) = (ld.row(1)[k], data.k.dim(n));
            if l1 != kd {
                out.violations.push(CheckViolation::new(n, Some(1), &format!("coordinate {i}: dim L_1 D = dim K"), l1, kd));
            }
            for p in 2..=3 {
                if ld.row(p)[k] != 0 {
                    out.violations.push(CheckViolation::new(n, Some(p), &format!("coordinate {i}: L_p D = 0"), ld.row(p)[k], 0));
                }
            }
            let up = n.plus_unit(i);
            for p in 0..=max_p {
                let lhs = hd.get(p, n);
                let below = if p >= 2 { hk.as_ref().map_or(0, |t| t.get(p - 2, n)) } else { 0 };
                let rhs = table.get(p, &up) + below;
                if lhs > rhs {
                    out.violations.push(CheckViolation::new(
                        n,
                        Some(p),
                        &format!("coordinate {i}: dim H_p(DV)_n <= dim H_p(V)_(n+e_i) + dim H_(p-2)(KV)_n"),
                        lhs,
                        rhs,
                    ));
                }
            }
            if max_p >= 1 && hd.get(1, n) > table.get(1, &up) {
                out.violations.push(CheckViolation::new(
                    n,
                    Some(1),
                    &format!("coordinate {i}: dim H_1(DV)_n <= dim H_1(V)_(n+e_i)"),
                    hd.get(1, n),
                    table.get(1, &up),
                ));
            }
        }
    }
    Ok(out)
}

fn church<F: Field>(v: &TruncatedModule<F>) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    for i in 0..v.m() {
        let mut o = church_lemma_check(v, i)?;
        for x in &mut o.violations {
            x.relation = format!("coordinate {i}: {}", x.relation);
        }
        out.merge(o);
    }
    Ok(out)
}

fn split_identities<F: Field>(v: &TruncatedModule<F>, max_q: usize, engine: Engine) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let split = Split::new(v.m(), &[0])?;
    let h = h0(v)?;
    let hor = split_h0(v, &split, Side::Horizontal)?;
    let ver = split_h0(v, &split, Side::Vertical)?;
    let ver_hor = split_h0(&hor, &split, Side::Vertical)?;
    let hor_ver = split_h0(&ver, &split, Side::Horizontal)?;
    let tables = [
        (Side::Horizontal, hor_ver_homology(v, &split, Side::Horizontal, max_q, engine)?, &hor),
        (Side::Vertical, hor_ver_homology(v, &split, Side::Vertical, max_q, engine)?, &ver),
    ];
    for n in v.window().degrees() {
        out.degrees_tested += 1;
        let tilde = tilde_subspace(v, n)?;
        let a = tilde_along(v, n, &split.horizontal, &split.horizontal)?;
        let b = tilde_along(v, n, &split.vertical, &split.vertical)?;
        let sum = a.sum(&b);
        if !tilde.same_as(&sum) {
            out.violations.push(CheckViolation::new(n, Some(0), "tilde = hor + ver", format!("dim {}", tilde.dim()), format!("dim {}", sum.dim())));
        }
        for (label, x) in [("H0ver(H0hor V) = H0 V", ver_hor.dim(n)), ("H0hor(H0ver V) = H0 V", hor_ver.dim(n))] {
            if x != h.dim(n) {
                out.violations.push(CheckViolation::new(n, Some(0), label, x, h.dim(n)));
            }
        }
        for (side, table, quotient) in &tables {
            if table.get(0, n) != quotient.dim(n) {
                out.violations.push(CheckViolation::new(
                    n,
                    Some(0),
                    &format!("{side:?} homology slice = H0 of side"),
                    table.get(0, n),
                    quotient.dim(n),
                ));
            }
        }
    }
    Ok(out)
}

/// `dim M^C(W, Z)_(X, Y) = |A(W, X)| dim M^B(Z)_Y` with `A` the first
/// coordinate, for every generator degree `(W, Z)`.
fn restrict_free<F: Field>(field: &F, m: usize, top: usize, gens: &[MultiIndex]) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::default();
    let a = [0usize];
    let b: Vec<usize> = (1..m).collect();
    for w in gens {
        let full = free_module(field, w, Window::new(m, top))?;
        let (wa, wb) = (w.select(&a), w.select(&b));
        for x in degrees_up_to(1, top) {
            let r = restrict_coords(&full, &a, &x)?;
            let factor = hom_size(&wa, &x)? as usize;
            let mb = if wb.total() <= top - x.total() {
                Some(free_module(field, &wb, Window::new(m - 1, top - x.total()))?)
            } else {
                None
            };
            for y in r.window().degrees() {
                out.degrees_tested += 1;
                let expect = factor * mb.as_ref().map_or(0, |mb| mb.dim(y));
                if r.dim(y) != expect {
                    let mut c = vec![x.get(0)];
                    c.extend_from_slice(y.coords());
                    out.violations.push(CheckViolation::new(
                        &MultiIndex::new(c),
                        None,
                        &format!("restriction of M({w})"),
                        r.dim(y),
                        expect,
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn table_mismatch(a: &HomologyTable, b: &HomologyTable, what: &str) -> CheckOutcome {
    let mut out = CheckOutcome::default();
    for i in 0..=a.max_i().min(b.max_i()) {
        for n in a.degrees() {
            out.degrees_tested += 1;
            if a.get(i, n) != b.get(i, n) {
                out.violations.push(CheckViolation::new(n, Some(i), what, a.get(i, n), b.get(i, n)));
            }
        }
    }
    if !out.violations.is_empty() {
        out.violations.push(CheckViolation::new(&MultiIndex::zero(0), None, &format!("{what}: full tables"), a.to_json(), b.to_json()));
    }
    out
}

fn run_checks<F: Field>(ctx: &Ctx<'_, F>) -> Result<Vec<CheckReport>> {
    let cfg = ctx.cfg;
    let engine = cfg.engine();
    let v = ctx.v;
    let name = cfg.campaign.as_str();
    let one = |o: CheckOutcome| Ok(vec![o.report(name, ctx.seed)]);
    match name {
        "ce-m1" | "main-bound" | "weak-bound" => one(bound_outcome(ctx.table, &ctx.bounds.per_index, "H_i(V)_n")),
        "four-term" => one(four_term(v)?),
        "two-row" => one(two_row(v, ctx.table, engine)?),
        "church" => one(church(v)?),
        "kv-bounds" => {
            let kv = bold_functors(v)?.k;
            let t = homology_with(&kv, 1, engine)?;
            one(bound_outcome(&t, &[ctx.bounds.prime, ctx.bounds.dprime], "H_i(KV)_n"))
        }
        "degS-degD" => {
            let bold = bold_functors(v)?;
            let t = homology_with(&bold.d, 1, engine)?;
            let mut o = bound_outcome(&t, &[Some(cfg.d - 1), Some(cfg.r)], "H_i(DV)_n");
            let dv = degree(v);
            if !dv.censored {
                o.degrees_tested += 1;
                let ds = degree(&bold.sigma);
                if !ds.censored && dv.value > 1 + ds.value {
                    o.violations.push(CheckViolation::new(&MultiIndex::zero(v.m()), None, "deg V <= 1 + deg ΣV", dv.value, 1 + ds.value));
                }
            }
            one(o)
        }
        "split-h0" => one(split_identities(v, cfg.max_i, engine)?),
        "restrict-free" => {
            let gens = ctx.pres.map(|p| p.generators.clone()).unwrap_or_default();
            one(restrict_free(v.field(), v.m(), v.top(), &gens)?)
        }
        "lift-strategies" => {
            let greedy = homology_with(v, cfg.max_i, Engine::Resolution(LiftStrategy::PivotGreedy))?;
            let random = homology_with(v, cfg.max_i, Engine::Resolution(LiftStrategy::Random { seed: ctx.seed }))?;
            let res = free_resolution(v, cfg.max_i + 1, LiftStrategy::Random { seed: ctx.seed })?;
            let mut o = table_mismatch(&greedy, &random, "pivot-greedy = random lifts");
            for (i, n) in res.certify(v)? {
                o.violations.push(CheckViolation::new(&n, Some(i), "resolution certificate", "fails", "d d = 0, exact"));
            }
            one(o)
        }
        "window-stability" => {
            let pres = ctx.pres.ok_or_else(|| input_err!("window-stability needs a presentation"))?;
            let (big, _) = from_presentation(pres, Window::new(v.m(), v.top() + 2), v.field())?;
            let wide = homology_with(&big, cfg.max_i, engine)?.truncate(cfg.max_i, v.top())?;
            let mut o = table_mismatch(&wide, ctx.table, "N+2 then truncate = N");
            let vt = big.truncate(v.top())?;
            for n in v.window().degrees() {
                if vt.dim(n) != v.dim(n) {
                    o.violations.push(CheckViolation::new(n, None, "module dims", vt.dim(n), v.dim(n)));
                }
            }
            one(o)
        }
        "compare-oracle" => {
            let oracle = tor_oracle(v, cfg.max_i, cfg.budget())?;
            one(table_mismatch(ctx.table, &oracle, "homology table = Tor oracle"))
        }
        other => Err(input_err!("unknown campaign '{other}'")),
    }
}

fn run_instance<F: Field>(field: &F, cfg: &CampaignConfig, bounds: &Bounds, k: usize) -> Result<InstanceResult> {
    let seed = cfg.instance_seed(k);
    let pres = random_presentation(field, cfg.m, cfg.d, cfg.r, cfg.generators, cfg.relations, seed)?;
    let (v, _) = from_presentation(&pres, Window::new(cfg.m, cfg.top), field)?;
    let total_dim = v.total_dim();
    let mut result = InstanceResult {
        seed,
        total_dim,
        skipped: None,
        nonzero: !v.is_zero(),
        higher_homology: false,
        t: Vec::new(),
        censored: Vec::new(),
        checks: Vec::new(),
        instance: None,
    };
    if total_dim > cfg.max_total_dim {
        result.skipped = Some(format!("total dimension {total_dim} exceeds {}", cfg.max_total_dim));
        return Ok(result);
    }
    let bad = validate(&v);
    if !bad.is_empty() {
        let violations =
            bad.iter().map(|x| CheckViolation::new(&x.degree, None, x.relation, "violated", "holds")).collect();
        result.checks.push(CheckOutcome { degrees_tested: v.window().degrees().len(), violations }.report("validate", seed));
        result.instance = Some(PresentationFile::new(&pres, cfg.top, field).to_json());
        return Ok(result);
    }
    let engine = cfg.engine();
    let table = homology_with(&v, cfg.max_i, engine)?;
    result.t = table.t_all();
    result.censored = (0..=table.max_i()).map(|i| table.censored(i)).collect();
    result.higher_homology = (1..=table.max_i()).any(|i| table.row(i).iter().any(|&x| x > 0));
    let ctx = Ctx { cfg, bounds, v: &v, pres: Some(&pres), table: &table, seed };
    match run_checks(&ctx) {
        Ok(checks) => result.checks = checks,
        Err(Error::Budget(why)) => result.skipped = Some(why),
        Err(e) => return Err(e),
    }
    if result.checks.iter().any(|c| !c.passed()) {
        result.instance = Some(PresentationFile::new(&pres, cfg.top, field).to_json());
    }
    Ok(result)
}

fn run_typed<F: Field>(field: &F, cfg: &CampaignConfig) -> Result<CampaignReport> {
    let bounds = bounds_for(cfg)?;
    let mut instances =
        (0..cfg.count).into_par_iter().map(|k| run_instance(field, cfg, &bounds, k)).collect::<Result<Vec<_>>>()?;
    instances.sort_by_key(|x| x.seed);
    let mut summary = Summary { instances: instances.len(), ..Summary::default() };
    for inst in &instances {
        summary.skipped += usize::from(inst.skipped.is_some());
        summary.nonzero += usize::from(inst.nonzero);
        summary.with_higher_homology += usize::from(inst.higher_homology);
        for c in &inst.checks {
            summary.degrees_tested += c.degrees_tested;
            summary.violations += c.violations.len();
        }
    }
    let bound_campaign = matches!(cfg.campaign.as_str(), "ce-m1" | "main-bound" | "weak-bound");
    let vacuous = if bound_campaign {
        Some(vacuous(&bounds.per_index, cfg.top))
    } else if cfg.campaign == "kv-bounds" {
        Some(vacuous(&[bounds.prime, bounds.dprime], cfg.top - 1))
    } else {
        None
    };
    let verdict = match (summary.violations, vacuous) {
        (0, Some(true)) => "vacuous",
        (0, _) => "pass",
        _ => "fail",
    };
    Ok(CampaignReport {
        campaign: cfg.campaign.clone(),
        config: cfg.clone(),
        environment: Environment {
            field: cfg.field.label(),
            seed: cfg.seed,
            module_format: MODULE_FORMAT.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        bound: bounds.label.clone(),
        vacuous,
        instances,
        summary,
        verdict: verdict.to_string(),
    })
}

/// Runs a campaign. Instances run in parallel; the report is sorted by seed
/// and carries no timings, so equal configs give byte-identical JSON.
pub fn run_campaign(cfg: &CampaignConfig) -> Result<CampaignReport> {
    cfg.check()?;
    match cfg.field {
        FieldConfig::Prime { p } => run_typed(&PrimeField::new(p)?, cfg),
        FieldConfig::Rationals => run_typed(&Rationals, cfg),
    }
}

/// Oracle equivalence over the instances of `cfg` (its campaign name is
/// replaced by `compare-oracle`); the homology side uses the resolution.
/// Unlike a campaign, an instance over budget refuses the whole run.
pub fn compare_oracle(cfg: &CampaignConfig) -> Result<CampaignReport> {
    let mut cfg = cfg.clone();
    cfg.campaign = "compare-oracle".to_string();
    cfg.engine = "resolution".to_string();
    let report = run_campaign(&cfg)?;
    if let Some(inst) = report.instances.iter().find(|x| x.skipped.is_some()) {
        let why = inst.skipped.as_deref().unwrap_or_default();
        return Err(Error::Budget(format!("instance seed {}: {why}", inst.seed)));
    }
    Ok(report)
}

/// A single-module check from [`MODULE_CHECKS`] for the `functors` command.
pub fn module_check<F: Field>(
    v: &TruncatedModule<F>,
    pres: Option<&Presentation<F>>,
    check: &str,
    max_i: usize,
    engine: Engine,
    seed: u64,
) -> Result<CheckReport> {
    if !MODULE_CHECKS.contains(&check) {
        return Err(input_err!("unknown check '{check}' (known: {})", MODULE_CHECKS.join(", ")));
    }
    if check != "restrict-free" && check != "split-h0" && v.top() == 0 {
        return Err(input_err!("{check} needs N >= 1"));
    }
    if (check == "split-h0" || check == "restrict-free") && v.m() < 2 {
        return Err(input_err!("{check} needs m >= 2"));
    }
    let outcome = match check {
        "four-term" => four_term(v)?,
        "two-row" => two_row(v, &homology_with(v, max_i, engine)?, engine)?,
        "church" => church(v)?,
        "split-h0" => split_identities(v, max_i, engine)?,
        _ => {
            let gens = pres.map(|p| p.generators.clone()).ok_or_else(|| input_err!("restrict-free needs a presentation file"))?;
            restrict_free(v.field(), v.m(), v.top(), &gens)?
        }
    };
    Ok(outcome.report(check, seed))
}
