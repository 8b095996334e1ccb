//! Suite runner behind the `thickmix` binary.
//!
//! Every suite returns a list of records `{module, name, claim, status,
//! data}`. `fail` means the artifact is broken; `finding` means a stated
//! claim disagrees with the exact computation. Only failures change the
//! exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::moebius::{
    bound_check, canonical_matrix, four_transitivity_search, moebius_apply,
    obstruction_configuration, product_entries, random_cp1, random_distinct_triple, random_gq,
    solve_three_transitive, Ball, CP1Point, GQ,
};
use crate::returnsets::{
    block_inside_cylinder, build_thick_n_chacon, build_thick_n_generic, cylinder_basis,
    cylinder_to_block_cover, gamma, in_script_m, mixing_defect, reachable_range,
    return_set_bruteforce, return_set_structured, script_m, shift_identity_check,
    weak_mixing_witness, CylinderSet, PieceProvenance,
};
use crate::torus::{
    act, non_mixing_certificate, random_rect, rat, shear_hits, standard_non_mixing_pair,
    transitivity_witness, Rect,
};
use crate::words::{
    block_length, block_length_i64, chacon_block, substitute, window, DEFAULT_DEPTH_CAP,
};
use crate::zsets::{
    certified_half_width, gap_element, h_set, interval_run_big, interval_stats, truncated_h_sum,
    HSum, Interval,
};

/// Version of `schema/report.schema.json` that reports conform to.
pub const SCHEMA_VERSION: &str = "1.0.0";

/// The shipped JSON schema for reports.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

pub const MAX_SAMPLES: u64 = 1_000_000;
pub const MAX_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Chacon,
    Zset,
    Returnset,
    Thick,
    Torus,
    Moebius,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Chacon, Zset, Returnset, Thick, Torus, Moebius],
            s => vec![s],
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

fn parse_range(s: &str) -> std::result::Result<Interval, String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "thickmix",
    version,
    about = "Run exact verification suites and emit a report"
)]
pub struct Cli {
    /// Suite to run.
    #[arg(value_enum)]
    pub suite: Suite,
    /// Block level / window depth.
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
    /// Truncation level of the direct sums.
    #[arg(long, default_value_t = 6)]
    pub trunc: u32,
    /// Shift range LO..HI for return-set comparisons.
    #[arg(long, default_value = "-27..27", value_parser = parse_range, allow_hyphen_values = true)]
    pub range: Interval,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Samples for the Möbius bound check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    /// Search budget for the torus and Möbius searches.
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub suite: Suite,
    pub depth: u32,
    pub trunc: u32,
    pub range: Interval,
    pub seed: u64,
    pub samples: u64,
    pub budget: u64,
    pub out: Option<String>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            depth: 6,
            trunc: 6,
            range: Interval { lo: -27, hi: 27 },
            seed: 42,
            samples: 10_000,
            budget: 100_000,
            out: None,
            format: Format::Json,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::InvalidDepth(0));
        }
        if self.depth > DEFAULT_DEPTH_CAP {
            return Err(Error::DepthExceedsCap {
                depth: self.depth,
                cap: DEFAULT_DEPTH_CAP,
            });
        }
        if !(2..=DEFAULT_DEPTH_CAP).contains(&self.trunc) {
            return Err(Error::InvalidParameter {
                name: "trunc",
                reason: format!("must lie in 2..={DEFAULT_DEPTH_CAP}, got {}", self.trunc),
            });
        }
        let suites = self.suite.members();
        if suites.contains(&Suite::Thick) && self.trunc < 5 {
            return Err(Error::InvalidParameter {
                name: "trunc",
                reason: format!("the thick suite needs trunc >= 5, got {}", self.trunc),
            });
        }
        if suites.contains(&Suite::Returnset) {
            // The widest pattern compared is B_2 against a shift of ±4.
            let b2 = CylinderSet::block(2)?;
            for m in [-4, 4] {
                let reach = reachable_range(&b2, &b2.shifted(m)?, self.depth)?;
                if !reach.contains_interval(&self.range) {
                    let shift = if reach.contains(self.range.lo) {
                        self.range.hi
                    } else {
                        self.range.lo
                    };
                    return Err(Error::UnreachableRange {
                        shift,
                        span: 2 * b2.word.len() as i64 + shift.abs() + 4,
                        depth: self.depth,
                        reach: block_length_i64(self.depth - 1)? + 1,
                    });
                }
            }
        }
        if self.samples > MAX_SAMPLES {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!("at most {MAX_SAMPLES}, got {}", self.samples),
            });
        }
        if self.budget > MAX_BUDGET {
            return Err(Error::InvalidParameter {
                name: "budget",
                reason: format!("at most {MAX_BUDGET}, got {}", self.budget),
            });
        }
        Ok(())
    }
}

impl From<Cli> for RunConfig {
    fn from(c: Cli) -> Self {
        Self {
            suite: c.suite,
            depth: c.depth,
            trunc: c.trunc,
            range: c.range,
            seed: c.seed,
            samples: c.samples,
            budget: c.budget,
            out: c.out.map(|p| p.display().to_string()),
            format: c.format,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Finding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub module: &'static str,
    pub name: String,
    pub claim: String,
    pub status: Status,
    pub data: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub finding: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub tool: Tool,
    pub config: RunConfig,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl Report {
    /// 0 when no record failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }

    pub fn record(&self, module: &str, name: &str) -> Option<&Record> {
        self.records
            .iter()
            .find(|r| r.module == module && r.name == name)
    }
}

fn verdict(ok: bool, otherwise: Status) -> Status {
    if ok {
        Status::Pass
    } else {
        otherwise
    }
}

struct Collector {
    module: &'static str,
    records: Vec<Record>,
}

impl Collector {
    fn new(module: &'static str) -> Self {
        Self {
            module,
            records: Vec::new(),
        }
    }

    /// Runs one check; a library error becomes a failed record.
    fn check(&mut self, name: &str, claim: &str, f: impl FnOnce() -> Result<(Status, Value)>) {
        let (status, data) = match f() {
            Ok(r) => r,
            Err(e) => (Status::Fail, json!({ "error": e.to_string() })),
        };
        self.records.push(Record {
            module: self.module,
            name: name.to_string(),
            claim: claim.to_string(),
            status,
            data,
        });
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

/// Runs the configured suites. Deterministic in `(config, seed)`.
pub fn dispatch(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let mut records = Vec::new();
    for suite in config.suite.members() {
        records.extend(match suite {
            Suite::Chacon => chacon_suite(config),
            Suite::Zset => zset_suite(config),
            Suite::Returnset => returnset_suite(config),
            Suite::Thick => thick_suite(config),
            Suite::Torus => torus_suite(config),
            Suite::Moebius => moebius_suite(config),
            Suite::All => unreachable!("expanded by members"),
        });
    }
    records.sort_by(|a, b| (a.module, &a.name).cmp(&(b.module, &b.name)));
    let mut summary = Summary::default();
    for r in &records {
        match r.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Finding => summary.finding += 1,
        }
    }
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: Tool {
            name: "thickmix",
            version: env!("CARGO_PKG_VERSION"),
        },
        config: config.clone(),
        summary,
        records,
    })
}

fn chacon_suite(cfg: &RunConfig) -> Vec<Record> {
    let mut c = Collector::new("chacon");
    let depth = cfg.depth;
    c.check(
        "substitution_agrees",
        "B_{n+1} = B_n B_n 1 B_n is the image of B_n under 0 -> 0010, 1 -> 1",
        || {
            let mut bad = Vec::new();
            for n in 1..depth {
                if chacon_block(n + 1)? != substitute(&chacon_block(n)?) {
                    bad.push(n);
                }
            }
            Ok((
                verdict(bad.is_empty(), Status::Fail),
                json!({ "levels": depth, "mismatches": bad }),
            ))
        },
    );
    c.check("block_length", "|B_n| = (3^{n+1} - 1)/2", || {
        let b = chacon_block(depth)?;
        let expected = block_length(depth);
        let ok = BigInt::from(b.len()) == expected;
        let mut data =
            json!({ "depth": depth, "length": b.len(), "expected": expected.to_string() });
        if b.len() <= 1093 {
            data["block"] = json!(b.to_string());
        }
        Ok((verdict(ok, Status::Fail), data))
    });
    c.check(
        "window",
        "the window B_K B_K sits at [-l_K, l_K) in the fixed point",
        || {
            let w = window(depth)?;
            let l = block_length_i64(depth)?;
            let ok = w.start() == -l && w.end() == l;
            Ok((
                verdict(ok, Status::Fail),
                json!({ "depth": depth, "start": w.start(), "end": w.end(),
                        "certified_word_len": w.certified_word_len() }),
            ))
        },
    );
    c.records
}

fn zset_suite(cfg: &RunConfig) -> Vec<Record> {
    let mut c = Collector::new("zset");
    let trunc = cfg.trunc;
    c.check("h_sets", "H_m = {0, ±l_m, ±(l_m + 1), ±3^{m+1}}", || {
        let mut sets = Vec::new();
        let mut ok = true;
        for m in 1..=3 {
            let h = h_set(m)?;
            let l = block_length_i64(m)?;
            let t = 3i64.pow(m + 1);
            ok &= h.elements() == [-t, -l - 1, -l, 0, l, l + 1, t];
            sets.push(json!({ "m": m, "elements": h.elements() }));
        }
        Ok((verdict(ok, Status::Fail), json!(sets)))
    });
    c.check(
        "certified_range",
        "a truncated sum H_k ⊕ ⋯ ⊕ H_{K-1} agrees with the full sum on its certified range",
        || {
            let mut cases = Vec::new();
            let mut ok = true;
            for k in 1..=2u32.min(trunc - 1) {
                let half = certified_half_width(k, trunc)
                    .to_i64()
                    .ok_or(Error::Overflow("certified range"))?;
                let t = truncated_h_sum(k, trunc, Interval::symmetric(half))?;
                let dec = HSum::new(k)?;
                let disagreements: Vec<i64> = Interval::symmetric(half)
                    .iter()
                    .filter(|&x| t.contains(x) != dec.contains(&BigInt::from(x)))
                    .collect();
                ok &= disagreements.is_empty();
                cases.push(json!({
                    "k": k, "trunc": trunc, "half_width": half,
                    "size": t.len(), "disagreements": disagreements,
                }));
            }
            Ok((verdict(ok, Status::Fail), json!(cases)))
        },
    );
    c.check(
        "interval_runs",
        "the sum of {l_i, l_i + 1} over m - 1 consecutive levels is an interval of length m",
        || {
            let mut runs = Vec::new();
            for k in 1..=5 {
                for m in 2..=7 {
                    let r = interval_run_big(k, m)?;
                    runs.push(json!({ "k": k, "m": m, "start": r.start.to_string() }));
                }
            }
            Ok((Status::Pass, json!(runs)))
        },
    );
    c.check(
        "gap_elements",
        "(3^{m+1} - 3)/2 is not in H_1 ⊕ H_2 ⊕ ⋯",
        || {
            let dec = HSum::new(1)?;
            let mut members = Vec::new();
            let mut gaps = Vec::new();
            for m in 1..=6 {
                let g = gap_element(m)?;
                gaps.push(g);
                if dec.contains(&BigInt::from(g)) {
                    members.push(g);
                }
            }
            Ok((
                verdict(members.is_empty(), Status::Finding),
                json!({ "gaps": gaps, "members": members }),
            ))
        },
    );
    c.check(
        "thickness",
        "H_1 ⊕ H_2 ⊕ ⋯ contains arbitrarily long intervals",
        || {
            let half = certified_half_width(1, trunc)
                .to_i64()
                .ok_or(Error::Overflow("certified range"))?;
            let t = truncated_h_sum(1, trunc, Interval::symmetric(half))?;
            let stats = interval_stats(&t);
            let longest = stats
                .runs
                .iter()
                .max_by_key(|r| (r.1, std::cmp::Reverse(r.0.unsigned_abs())))
                .copied();
            Ok((
                verdict(stats.max_run_length >= trunc as u64 - 1, Status::Finding),
                json!({ "trunc": trunc, "certified_half_width": half,
                        "max_run_length": stats.max_run_length, "longest_run": longest }),
            ))
        },
    );
    c.records
}

/// Smallest depth whose window certifies `n` for the pair.
fn depth_for(a: &CylinderSet, b: &CylinderSet, n: i64) -> Result<u32> {
    for depth in 1..=DEFAULT_DEPTH_CAP {
        if reachable_range(a, b, depth)?.contains(n) {
            return Ok(depth);
        }
    }
    Err(Error::DepthExceedsCap {
        depth: DEFAULT_DEPTH_CAP + 1,
        cap: DEFAULT_DEPTH_CAP,
    })
}

fn h_equality(k: u32, depth: u32) -> Result<(Status, Value)> {
    let h = h_set(k)?;
    let range = h.range();
    let b = CylinderSet::block(k)?;
    let n = return_set_bruteforce(&b, &b, depth, range)?.set;
    let (extra, missing) = n.difference_on(&h, range);
    let status = if !missing.is_empty() {
        Status::Fail
    } else {
        verdict(extra.is_empty(), Status::Finding)
    };
    Ok((
        status,
        json!({ "k": k, "depth": depth, "range": range, "bruteforce": n.elements(),
                "h": h.elements(), "extra": extra, "missing": missing }),
    ))
}

/// Words of length ≤ 3 occurring in `ω`, offsets in `[-3, 3]`, shifts in
/// `[-10, 10]`.
pub fn random_shift_case<R: Rng>(
    rng: &mut R,
    basis: &[CylinderSet],
) -> (CylinderSet, CylinderSet, i64) {
    let pick = |rng: &mut R| {
        let w = &basis[rng.gen_range(0..basis.len())];
        CylinderSet::new(w.word.clone(), rng.gen_range(-3..=3))
    };
    let a = pick(rng);
    let b = pick(rng);
    (a, b, rng.gen_range(-10..=10))
}

fn returnset_suite(cfg: &RunConfig) -> Vec<Record> {
    let mut c = Collector::new("returnset");
    let (depth, trunc, range) = (cfg.depth, cfg.trunc, cfg.range);
    c.check(
        "h1_equality",
        "n[B_1] ∩ [B_1] ≠ ∅ exactly for n ∈ H_1 within [-9, 9]",
        || h_equality(1, 4),
    );
    c.check(
        "h2_equality",
        "n[B_2] ∩ [B_2] ≠ ∅ exactly for n ∈ H_2 within [-27, 27]",
        || h_equality(2, 5),
    );
    c.check(
        "structured_vs_bruteforce",
        "N([B_k], m[B_k]) = m + (H_k ⊕ H_{k+1} ⊕ ⋯)",
        || {
            let mut cases = Vec::new();
            let mut agree = true;
            for k in 1..=2u32 {
                let b = CylinderSet::block(k)?;
                for m in -4..=4i64 {
                    let s = return_set_structured(k, m, trunc, range)?.set;
                    let bm = b.shifted(m)?;
                    let compared = s
                        .certified_range()
                        .intersect(&reachable_range(&b, &bm, depth)?);
                    if compared.is_empty() {
                        cases.push(json!({ "k": k, "m": m, "compared": compared }));
                        continue;
                    }
                    let brute = return_set_bruteforce(&b, &bm, depth, compared)?.set;
                    let (only_structured, only_bruteforce) = s.difference_on(&brute, compared);
                    agree &= only_structured.is_empty() && only_bruteforce.is_empty();
                    cases.push(json!({
                        "k": k, "m": m, "compared": compared,
                        "only_structured": only_structured, "only_bruteforce": only_bruteforce,
                    }));
                }
            }
            Ok((verdict(agree, Status::Finding), json!(cases)))
        },
    );
    c.check(
        "gap_exclusion",
        "(3^{m+1} - 3)/2 ∉ N([B_1], [B_1])",
        || {
            let b = CylinderSet::block(1)?;
            let mut members = Vec::new();
            for m in 1..=4 {
                let g = gap_element(m)?;
                let n = return_set_bruteforce(&b, &b, m + 3, Interval::symmetric(g))?.set;
                if n.contains(g) || n.contains(-g) {
                    members.push(g);
                }
            }
            Ok((
                verdict(members.is_empty(), Status::Finding),
                json!({ "members": members }),
            ))
        },
    );
    c.check(
        "symmetry",
        "n ∈ N([B_k], [B_k]) iff -n ∈ N([B_k], [B_k])",
        || {
            let mut ok = true;
            for k in 1..=2 {
                let b = CylinderSet::block(k)?;
                let half = reachable_range(&b, &b, depth)?
                    .hi
                    .min(range.lo.abs().max(range.hi.abs()));
                ok &= return_set_bruteforce(&b, &b, depth, Interval::symmetric(half))?
                    .set
                    .is_symmetric();
            }
            Ok((verdict(ok, Status::Finding), json!({ "depth": depth })))
        },
    );
    c.check(
        "weak_mixing",
        "m + a = b + n lies in mN([B_k], [B_k]) ∩ nN([B_k], [B_k])",
        || {
            let mut cases = Vec::new();
            let mut ok = true;
            for k in 1..=2 {
                let b = CylinderSet::block(k)?;
                for m in 1..=3 {
                    for n in 0..m.min(3) {
                        let w = weak_mixing_witness(k, m, n)?;
                        let mut hits = Vec::new();
                        for shift in [m, n] {
                            let bs = b.shifted(shift)?;
                            let d = depth_for(&b, &bs, w.value)?;
                            let set = return_set_bruteforce(
                                &b,
                                &bs,
                                d,
                                Interval::new(w.value, w.value)?,
                            )?
                            .set;
                            hits.push(set.contains(w.value));
                        }
                        ok &= hits.iter().all(|&h| h);
                        cases.push(json!({ "k": k, "m": m, "n": n, "a": w.a, "b": w.b,
                                           "value": w.value, "confirmed": hits }));
                    }
                }
            }
            Ok((verdict(ok, Status::Finding), json!(cases)))
        },
    );
    c.check("shift_identity", "g + N(A, B) = N(A, gB)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let basis = cylinder_basis(3, 5)?;
        let mut failures = Vec::new();
        for _ in 0..50 {
            let (a, b, g) = random_shift_case(&mut rng, &basis);
            let r = shift_identity_check(&a, &b, g, 5, Interval::symmetric(20))?;
            if !r.holds {
                failures.push(json!({ "a": a, "b": b, "g": g, "detail": r }));
            }
        }
        Ok((
            verdict(failures.is_empty(), Status::Fail),
            json!({ "cases": 50, "failures": failures }),
        ))
    });
    c.check(
        "block_cover",
        "every cylinder [A]_k lies inside a shifted block cylinder [B_l]_j",
        || {
            let mut cases = Vec::new();
            let mut all_covered = true;
            for word in ["0010", "1", "0100", "0010010"] {
                let a = CylinderSet::new(word.parse()?, 0);
                let entry = match cylinder_to_block_cover(&a, 5) {
                    Ok(cover) => json!({ "word": word, "cover": cover }),
                    Err(e @ (Error::NoCoverFound { .. } | Error::EmptyCylinder { .. })) => {
                        all_covered = false;
                        let inside = block_inside_cylinder(&a, 5).ok();
                        json!({ "word": word, "error": e.to_string(), "block_inside": inside })
                    }
                    Err(e) => return Err(e),
                };
                cases.push(entry);
            }
            Ok((verdict(all_covered, Status::Finding), json!(cases)))
        },
    );
    c.check(
        "script_m_nesting",
        "𝓜_1 ⊃ 𝓜_2 ⊃ 𝓜_3 ⊃ ⋯",
        || {
            let mut ok = true;
            let mut levels = Vec::new();
            let mut prev: Option<crate::zsets::ZSet> = None;
            for k in 1..=3u32.min(trunc - 1) {
                let half = certified_half_width(k, trunc)
                    .to_i64()
                    .ok_or(Error::Overflow("certified range"))?;
                let m = match script_m(k, trunc, Interval::symmetric(half)) {
                    Ok(r) => r.set.certified_part(),
                    Err(Error::NotCertified(_)) => break,
                    Err(e) => return Err(e),
                };
                if let Some(p) = &prev {
                    let common = p.certified_range().intersect(&m.certified_range());
                    ok &= m.is_subset_on(p, common);
                }
                levels.push(json!({ "k": k, "certified": m.certified_range(),
                                    "size": m.len(), "contains_zero": m.contains(0) }));
                prev = Some(m);
            }
            Ok((verdict(ok, Status::Finding), json!(levels)))
        },
    );
    c.records
}

fn thick_suite(cfg: &RunConfig) -> Vec<Record> {
    let mut c = Collector::new("thick");
    let trunc = cfg.trunc;
    c.check(
        "chacon_construction",
        "an interval of length i can be picked from each 𝓜_i",
        || {
            let n = build_thick_n_chacon(3, trunc)?;
            let mut ok = true;
            for (idx, piece) in n.pieces.iter().enumerate() {
                let level = idx as u32 + 1;
                ok &= piece.level == level && piece.elements.len() == level as usize;
                ok &= piece.elements.windows(2).all(|w| &w[0] + 1 == w[1]);
                for x in &piece.elements {
                    for j in 1..=level {
                        ok &= in_script_m(j, x)?;
                    }
                }
            }
            let longest = n.union_runs().iter().map(|r| r.1).max().unwrap_or(0);
            ok &= longest >= 3;
            Ok((verdict(ok, Status::Finding), to_value(&n)))
        },
    );
    c.check(
        "mixing_defect",
        "at most l(l - 1)/2 elements of N miss N([B_k], m[B_k]) when |m| ≤ l_l",
        || {
            let n = build_thick_n_chacon(3, trunc)?;
            let d = mixing_defect(&n, 1, 0, 3)?;
            // Brute-force confirmation where the window reaches.
            let b = CylinderSet::block(1)?;
            let reach = reachable_range(&b, &b, cfg.depth)?;
            let mut confirmed = Vec::new();
            for x in &n.union {
                if let Some(x) = x.to_i64().filter(|x| reach.contains(*x)) {
                    let inside = return_set_bruteforce(&b, &b, cfg.depth, Interval::new(x, x)?)?
                        .set
                        .contains(x);
                    let structured_inside = !d.outside.contains(&BigInt::from(x));
                    if inside != structured_inside {
                        return Ok((Status::Finding, json!({ "defect": d, "disagreement": x })));
                    }
                    confirmed.push(x);
                }
            }
            let ok = (d.outside.len() as u64) <= d.bound;
            Ok((
                verdict(ok, Status::Finding),
                json!({ "defect": d, "bruteforce_confirmed": confirmed }),
            ))
        },
    );
    c.check(
        "generic_construction",
        "δ_m ∈ 𝓜_m ∩ ⋂ γ_i 𝓜_m gives N_m = {δ_m, γ_1^{-1}δ_m, …} with N thick",
        || {
            let n = build_thick_n_generic(3, 3, cfg.depth)?;
            let union = n.union_i64().ok_or(Error::Overflow("generic union"))?;
            let mut ok = true;
            let mut witnesses = Vec::new();
            for piece in &n.pieces {
                let PieceProvenance::Basis { delta, basis, .. } = &piece.provenance else {
                    return Ok((Status::Fail, json!({ "error": "wrong provenance" })));
                };
                let shifts: Vec<i64> = (1..=piece.level).map(gamma).collect();
                ok &= union.binary_search(delta).is_ok()
                    && shifts
                        .iter()
                        .all(|g| union.binary_search(&(delta - g)).is_ok());
                witnesses.push(json!({ "m": piece.level, "delta": delta, "gammas": shifts }));
                // Pieces at level ≥ m return for every pair among the first m.
                for later in n.pieces.iter().filter(|p| p.level >= piece.level) {
                    for u in basis {
                        for v in basis {
                            for x in &later.elements {
                                let x = x.to_i64().ok_or(Error::Overflow("piece"))?;
                                ok &= return_set_bruteforce(u, v, cfg.depth, Interval::new(x, x)?)?
                                    .set
                                    .contains(x);
                            }
                        }
                    }
                }
            }
            Ok((
                verdict(ok, Status::Finding),
                json!({ "construction": n, "witnesses": witnesses }),
            ))
        },
    );
    c.records
}

/// `k` random rectangle pairs from `rng`.
pub fn random_pairs<R: Rng>(rng: &mut R, k: usize) -> Vec<(Rect, Rect)> {
    (0..k)
        .map(|_| (random_rect(rng, 12), random_rect(rng, 12)))
        .collect()
}

fn torus_suite(cfg: &RunConfig) -> Vec<Record> {
    let mut c = Collector::new("torus");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 1..=4 {
        let pairs = random_pairs(&mut rng, k);
        c.check(
            &format!("transitivity_k{k}"),
            "M = [[1, d], [0, 1]][[1, 0], [c, 1]] with c > 1/min width meets every pair",
            || {
                let t = transitivity_witness(&pairs, cfg.budget)?;
                let mut ok = t.matrix.det() == 1 && t.c >= t.c_threshold;
                for ((v, w), p) in pairs.iter().zip(&t.witnesses) {
                    ok &= v.contains(p) && w.contains(&act(&t.matrix, p));
                }
                Ok((
                    verdict(ok, Status::Fail),
                    json!({ "pairs": pairs, "witness": t }),
                ))
            },
        );
    }
    let (u, v) = standard_non_mixing_pair();
    c.check(
        "non_mixing_certificate",
        "g_a U ∩ V = ∅ for all a, so the action is not mixing",
        || {
            let cert = non_mixing_certificate(&u, &v)?;
            Ok((Status::Pass, to_value(&cert)))
        },
    );
    c.check(
        "non_mixing_spot_check",
        "g_a U ∩ V = ∅ for |a| ≤ 1000",
        || {
            let hits = shear_hits(&u, &v, -1000..=1000);
            Ok((
                verdict(hits.is_empty(), Status::Fail),
                json!({ "range": [-1000, 1000], "hits": hits }),
            ))
        },
    );
    c.check("non_mixing_band", "g_a U ⊂ [0, 1) × (1/5, 2/5)", || {
        let cert = non_mixing_certificate(&u, &v)?;
        let stated = (rat(1, 5), rat(2, 5));
        let same = cert.image_band == stated;
        Ok((
            verdict(same, Status::Finding),
            json!({
                "stated_band": ["1/5", "2/5"],
                "image_band": [cert.image_band.0.to_string(), cert.image_band.1.to_string()],
                "note": "g_a keeps the y coordinate, so the image band is the y interval of U; \
                         the conclusion g_a U ∩ V = ∅ is unaffected",
            }),
        ))
    });
    c.records
}

fn moebius_suite(cfg: &RunConfig) -> Vec<Record> {
    let mut c = Collector::new("moebius");
    let seed = cfg.seed;
    let zero = CP1Point::finite(GQ::new(rat(0, 1), rat(0, 1)));
    let one = CP1Point::finite(GQ::new(rat(1, 1), rat(0, 1)));
    c.check(
        "canonical_matrix",
        "M_(z1,z2,z3) sends z1, z2, z3 to 0, 1, ∞",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut with_infinity = 0;
            for _ in 0..100 {
                let t = random_distinct_triple(&mut rng, random_cp1);
                with_infinity += t.iter().any(|p| p.is_infinite()) as usize;
                let m = canonical_matrix(&t[0], &t[1], &t[2])?;
                let images = [
                    moebius_apply(&m, &t[0])?,
                    moebius_apply(&m, &t[1])?,
                    moebius_apply(&m, &t[2])?,
                ];
                if images != [zero.clone(), one.clone(), CP1Point::infinity()] {
                    return Ok((Status::Finding, json!({ "triple": t })));
                }
            }
            Ok((
                Status::Pass,
                json!({ "triples": 100, "with_infinity": with_infinity }),
            ))
        },
    );
    c.check(
        "three_transitivity",
        "M_w^{-1} M_z sends each z_i to w_i",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            for _ in 0..100 {
                let zs = random_distinct_triple(&mut rng, random_cp1);
                let ws = random_distinct_triple(&mut rng, random_cp1);
                solve_three_transitive(&zs, &ws)?;
            }
            Ok((Status::Pass, json!({ "pairs": 100 })))
        },
    );
    c.check(
        "product_entries",
        "the expanded entries a, b, c, d equal M_w^{-1} M_z up to scale",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
            let fin = |r: &mut ChaCha8Rng| CP1Point::finite(random_gq(r));
            for _ in 0..100 {
                let zs = random_distinct_triple(&mut rng, fin);
                let ws = random_distinct_triple(&mut rng, fin);
                match product_entries(&zs, &ws) {
                    Ok(_) => {}
                    Err(Error::ClaimFalsified(msg)) => {
                        return Ok((
                            Status::Finding,
                            json!({ "zs": zs, "ws": ws, "detail": msg }),
                        ))
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok((Status::Pass, json!({ "pairs": 100 })))
        },
    );
    c.check(
        "bound_check",
        "|γ(z)| ≤ 3 for z ∈ B(0, ε′) when γ maps B(i, ε) near B(i, ε)",
        || {
            let e = rat(1, 100);
            let r = bound_check(&e, &e, cfg.samples, seed)?;
            Ok((
                verdict(r.violations.is_empty(), Status::Finding),
                to_value(&r),
            ))
        },
    );
    c.check(
        "four_transitivity",
        "no γ maps B(i, ε) near B(i, ε) for i ≤ 3 and B(0, ε′) into B(4, 1/2)",
        || {
            let e = rat(1, 100);
            let config = obstruction_configuration(&e, &e)?;
            let r = four_transitivity_search(&config, cfg.budget, seed)?;
            Ok((verdict(r.witness.is_none(), Status::Finding), to_value(&r)))
        },
    );
    c.check(
        "four_transitivity_control",
        "a reachable fourth target is hit by the same search",
        || {
            let e = rat(1, 100);
            let mut config = obstruction_configuration(&e, &e)?;
            config[3].1 = Ball::new(GQ::new(rat(0, 1), rat(0, 1)), rat(3, 1))?;
            let r = four_transitivity_search(&config, cfg.budget.min(1000), seed)?;
            Ok((
                verdict(r.witness.is_some(), Status::Fail),
                json!({ "samples": r.samples }),
            ))
        },
    );
    c.records
}

/// Serializes a report. JSON output is pretty-printed with a trailing
/// newline; both formats are byte-stable.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} {}  suite={:?}  seed={}  schema={}",
        r.tool.name, r.tool.version, r.config.suite, r.config.seed, r.schema_version
    );
    let _ = writeln!(s, "{:<8} {:<10} {:<28} claim", "status", "module", "check");
    for rec in &r.records {
        let status = match rec.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Finding => "finding",
        };
        let _ = writeln!(
            s,
            "{:<8} {:<10} {:<28} {}",
            status, rec.module, rec.name, rec.claim
        );
    }
    let _ = writeln!(
        s,
        "pass: {}  fail: {}  finding: {}",
        r.summary.pass, r.summary.fail, r.summary.finding
    );
    s
}

/// Writes to `path`, or stdout when `None`.
pub fn write_report(report: &Report, path: Option<&Path>, format: Format) -> Result<()> {
    let body = render(report, format);
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Error::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| Error::Io {
                    path: "<stdout>".into(),
                    message: e.to_string(),
                })
        }
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = cli.out.clone();
    let config = RunConfig::from(cli);
    let report = match dispatch(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("thickmix: {e}");
            return 2;
        }
    };
    if let Err(e) = write_report(&report, out.as_deref(), config.format) {
        eprintln!("thickmix: {e}");
        return 1;
    }
    report.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: Suite) -> RunConfig {
        RunConfig {
            samples: 100,
            budget: 200,
            ..RunConfig::new(suite)
        }
    }

    fn schema() -> jsonschema::JSONSchema {
        let v: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
        jsonschema::JSONSchema::compile(&v).unwrap()
    }

    fn assert_valid(report: &Report) {
        let v: Value = serde_json::from_str(&render(report, Format::Json)).unwrap();
        let compiled = schema();
        if let Err(errors) = compiled.validate(&v) {
            let msgs: Vec<String> = errors
                .map(|e| format!("{} at {}", e, e.instance_path))
                .collect();
            panic!("schema violations: {msgs:#?}");
        };
    }

    #[test]
    fn chacon_suite_reports_the_block() {
        let r = dispatch(&RunConfig {
            depth: 3,
            ..cfg(Suite::Chacon)
        })
        .unwrap();
        let rec = r.record("chacon", "block_length").unwrap();
        assert_eq!(rec.status, Status::Pass);
        assert_eq!(
            rec.data["block"],
            json!("0010001010010001000101001010010001010010")
        );
        assert_eq!(rec.data["length"], json!(40));
        assert_eq!(r.exit_code(), 0);
        assert_valid(&r);
    }

    #[test]
    fn depth_cap_is_a_config_error() {
        let err = dispatch(&RunConfig {
            depth: 99,
            ..cfg(Suite::Returnset)
        })
        .unwrap_err();
        assert_eq!(err, Error::DepthExceedsCap { depth: 99, cap: 12 });
        assert_eq!(run(["thickmix", "returnset", "--depth", "99"]), 2);
    }

    #[test]
    fn unreachable_range_is_a_config_error() {
        let c = RunConfig {
            depth: 3,
            range: Interval { lo: -100, hi: 100 },
            ..cfg(Suite::Returnset)
        };
        assert!(matches!(dispatch(&c), Err(Error::UnreachableRange { .. })));
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["thickmix", "nonsense"]), 2);
        assert_eq!(run(["thickmix", "chacon", "--format", "xml"]), 2);
        assert_eq!(run(["thickmix", "chacon", "--range", "5"]), 2);
    }

    #[test]
    fn range_flag_accepts_negative_bounds() {
        let cli = Cli::try_parse_from(["thickmix", "zset", "--range", "-9..9"]).unwrap();
        assert_eq!(cli.range, Interval { lo: -9, hi: 9 });
    }

    #[test]
    fn reports_are_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let mut outputs = Vec::new();
        let path = dir.path().join("r.json");
        for _ in 0..2 {
            let p = path.to_str().unwrap();
            let code = run([
                "thickmix",
                "moebius",
                "--samples",
                "50",
                "--budget",
                "50",
                "--out",
                p,
            ]);
            assert_eq!(code, 0);
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1]);
    }

    #[test]
    fn text_format_has_counts() {
        let r = dispatch(&cfg(Suite::Chacon)).unwrap();
        let t = render(&r, Format::Text);
        assert_eq!(t.lines().last().unwrap(), "pass: 3  fail: 0  finding: 0");
        assert!(t.contains("block_length"));
    }

    #[test]
    fn io_errors_name_the_path() {
        let r = dispatch(&cfg(Suite::Chacon)).unwrap();
        let err =
            write_report(&r, Some(Path::new("/nonexistent/dir/r.json")), Format::Json).unwrap_err();
        assert!(matches!(err, Error::Io { ref path, .. } if path == "/nonexistent/dir/r.json"));
    }

    #[test]
    fn records_are_in_canonical_order() {
        let r = dispatch(&cfg(Suite::Torus)).unwrap();
        let keys: Vec<_> = r
            .records
            .iter()
            .map(|x| (x.module, x.name.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn every_suite_validates_against_the_schema() {
        for suite in [
            Suite::Zset,
            Suite::Returnset,
            Suite::Thick,
            Suite::Torus,
            Suite::Moebius,
        ] {
            let r = dispatch(&cfg(suite)).unwrap();
            assert_valid(&r);
            assert_eq!(r.summary.fail, 0, "{suite:?}: {:#?}", r.records);
        }
    }

    #[test]
    fn findings_do_not_fail_the_run() {
        let r = dispatch(&cfg(Suite::Returnset)).unwrap();
        let h1 = r.record("returnset", "h1_equality").unwrap();
        assert_eq!(h1.status, Status::Finding);
        assert_eq!(h1.data["extra"], json!([-8, 8]));
        assert_eq!(r.exit_code(), 0);
    }
}
