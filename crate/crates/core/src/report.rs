//! Report rendering: JSON (schema version "1"), CSV, and plain text.
//!
//! Big integers serialize as decimal strings, never as JSON numbers; every
//! real quantity appears as an enclosure with outward-rounded decimal
//! endpoints, so a report never overstates precision. Output is fully
//! deterministic: no timestamps, no environment-dependent content.

use serde::Serialize;

use crate::bigreal::Enclosure;
use crate::certify::{CertificateReport, WitnessOutcome};
use crate::primes::{PrimalityMethod, PrimalityStatus, PrimalityVerdict};
use crate::tower::{ConstructionParams, IntervalRule, TowerLevel};

/// Endpoint digits: enough for the default 1e-12 targets with margin to
/// audit refinement behavior, still readable.
const DECIMAL_DIGITS: usize = 30;

#[derive(Serialize)]
struct EnclosureDto {
    lo: String,
    hi: String,
    precision_bits: u32,
}

fn enc(e: &Enclosure) -> EnclosureDto {
    let (lo, hi) = e.decimal_endpoints(DECIMAL_DIGITS);
    EnclosureDto {
        lo,
        hi,
        precision_bits: e.precision_bits(),
    }
}

fn status_str(s: PrimalityStatus) -> &'static str {
    match s {
        PrimalityStatus::Composite => "composite",
        PrimalityStatus::ProvablePrime => "provable_prime",
        PrimalityStatus::ProbablePrime => "probable_prime",
    }
}

fn method_str(m: PrimalityMethod) -> &'static str {
    match m {
        PrimalityMethod::TrialDivision => "trial_division",
        PrimalityMethod::DeterministicMr => "deterministic_mr",
        PrimalityMethod::Bpsw => "bpsw",
    }
}

#[derive(Serialize)]
struct VerdictDto {
    status: &'static str,
    method: &'static str,
    rounds: u32,
}

fn verdict(v: &PrimalityVerdict) -> VerdictDto {
    VerdictDto {
        status: status_str(v.status),
        method: method_str(v.method),
        rounds: v.rounds,
    }
}

#[derive(Serialize)]
struct VariantDto {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
}

#[derive(Serialize)]
struct PrecisionDto {
    initial_bits: u32,
    max_bits: u32,
    target_width: f64,
}

#[derive(Serialize)]
struct ParamsDto {
    gamma: f64,
    variant: VariantDto,
    metric_epsilon: f64,
    horizon: u32,
    precision: PrecisionDto,
    max_p_bits: u32,
}

fn params_dto(p: &ConstructionParams) -> ParamsDto {
    let variant = match p.rule {
        IntervalRule::General { epsilon } => VariantDto {
            kind: "general",
            epsilon: Some(epsilon),
            delta: None,
        },
        IntervalRule::Delta { delta } => VariantDto {
            kind: "delta",
            epsilon: None,
            delta: Some(delta),
        },
    };
    ParamsDto {
        gamma: p.gamma,
        variant,
        metric_epsilon: p.effective_epsilon(),
        horizon: p.horizon,
        precision: PrecisionDto {
            initial_bits: p.precision.initial_bits,
            max_bits: p.precision.max_bits,
            target_width: p.precision.target_width,
        },
        max_p_bits: p.max_p_bits,
    }
}

#[derive(Serialize)]
struct MetricsDto {
    a: EnclosureDto,
    b: EnclosureDto,
    silverman_floor: EnclosureDto,
    f_floor: EnclosureDto,
    witness_f: EnclosureDto,
    witness_overlap_ok: bool,
    chain_ok: bool,
}

#[derive(Serialize)]
struct LevelDto {
    index: u32,
    d: String,
    p: String,
    d_verdict: VerdictDto,
    p_verdict: VerdictDto,
    log_p: EnclosureDto,
    log_d: EnclosureDto,
    abs_degree: String,
    generator_height: EnclosureDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MetricsDto>,
}

fn level_dto(l: &TowerLevel, m: Option<&crate::certify::LevelMetrics>) -> LevelDto {
    LevelDto {
        index: l.index,
        d: l.d.to_string(),
        p: l.p.to_string(),
        d_verdict: verdict(&l.d_verdict),
        p_verdict: verdict(&l.p_verdict),
        log_p: enc(&l.log_p),
        log_d: enc(&l.log_d),
        abs_degree: l.abs_degree.to_string(),
        generator_height: enc(&l.generator_height),
        metrics: m.map(|m| MetricsDto {
            a: enc(&m.a),
            b: enc(&m.b),
            silverman_floor: enc(&m.silverman_floor),
            f_floor: enc(&m.f_floor),
            witness_f: enc(&m.witness_f),
            witness_overlap_ok: m.witness_overlap_ok,
            chain_ok: m.chain_ok,
        }),
    }
}

#[derive(Serialize)]
struct AuditDto {
    a_monotone_from: Option<u32>,
    b_decreasing_from: Option<u32>,
    indeterminate_pairs: u32,
}

#[derive(Serialize)]
struct WitnessDto {
    eta: f64,
    index: Option<u32>,
}

#[derive(Serialize)]
struct SummaryDto {
    provable_prime: u32,
    probable_prime: u32,
}

#[derive(Serialize)]
struct ReportDto {
    schema_version: String,
    params: ParamsDto,
    levels: Vec<LevelDto>,
    audit: AuditDto,
    witness: WitnessDto,
    primality_summary: SummaryDto,
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

pub fn report_to_json(r: &CertificateReport) -> String {
    let dto = ReportDto {
        schema_version: r.schema_version.clone(),
        params: params_dto(&r.params),
        levels: r
            .levels
            .iter()
            .map(|(l, m)| level_dto(l, Some(m)))
            .collect(),
        audit: AuditDto {
            a_monotone_from: r.audit.a_monotone_from,
            b_decreasing_from: r.audit.b_decreasing_from,
            indeterminate_pairs: r.audit.indeterminate_pairs,
        },
        witness: WitnessDto {
            eta: r.witness_eta,
            index: r.witness_index,
        },
        primality_summary: SummaryDto {
            provable_prime: r.primality_summary.provable_prime,
            probable_prime: r.primality_summary.probable_prime,
        },
    };
    json_string(&dto)
}

/// Documented column order; one row per level.
pub const REPORT_CSV_HEADER: &str = "index,d,p,log_p_lo,log_p_hi,a_lo,a_hi,b_lo,b_hi,silverman_floor_lo,silverman_floor_hi,f_floor_lo,f_floor_hi";

pub fn report_to_csv(r: &CertificateReport) -> String {
    let mut out = String::from(REPORT_CSV_HEADER);
    out.push('\n');
    for (l, m) in &r.levels {
        let (lp_lo, lp_hi) = l.log_p.decimal_endpoints(DECIMAL_DIGITS);
        let (a_lo, a_hi) = m.a.decimal_endpoints(DECIMAL_DIGITS);
        let (b_lo, b_hi) = m.b.decimal_endpoints(DECIMAL_DIGITS);
        let (s_lo, s_hi) = m.silverman_floor.decimal_endpoints(DECIMAL_DIGITS);
        let (f_lo, f_hi) = m.f_floor.decimal_endpoints(DECIMAL_DIGITS);
        out.push_str(&format!(
            "{},{},{},{lp_lo},{lp_hi},{a_lo},{a_hi},{b_lo},{b_hi},{s_lo},{s_hi},{f_lo},{f_hi}\n",
            l.index, l.d, l.p
        ));
    }
    out
}

pub fn report_to_text(r: &CertificateReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "certificate (schema {}) for gamma = {}, {} horizon = {}\n",
        r.schema_version,
        r.params.gamma,
        match r.params.rule {
            IntervalRule::General { epsilon } => format!("epsilon = {epsilon},"),
            IntervalRule::Delta { delta } => format!("delta = {delta},"),
        },
        r.params.horizon
    ));
    for (l, m) in &r.levels {
        out.push_str(&format!(
            "level {:>3}: d = {}, p = {} ({})\n",
            l.index,
            l.d,
            l.p,
            status_str(l.p_verdict.status)
        ));
        out.push_str(&format!("  a  = {}\n", m.a));
        out.push_str(&format!("  b  = {}\n", m.b));
        out.push_str(&format!("  silverman_floor = {}\n", m.silverman_floor));
        out.push_str(&format!("  f_floor = {}\n", m.f_floor));
    }
    out.push_str(&format!(
        "audit: a strictly increasing from level {}, b strictly decreasing from level {}\n",
        opt(r.audit.a_monotone_from),
        opt(r.audit.b_decreasing_from)
    ));
    out.push_str(&format!(
        "witness (eta = {}): {}\n",
        r.witness_eta,
        match r.witness_index {
            Some(i) => format!("level {i}"),
            None => "not reached within horizon".into(),
        }
    ));
    out.push_str(&format!(
        "primality: {} provable, {} probable (bpsw)\n",
        r.primality_summary.provable_prime, r.primality_summary.probable_prime
    ));
    out
}

fn opt(v: Option<u32>) -> String {
    match v {
        Some(i) => i.to_string(),
        None => "-".into(),
    }
}

#[derive(Serialize)]
struct TowerDto {
    schema_version: String,
    params: ParamsDto,
    levels: Vec<LevelDto>,
}

pub fn tower_to_json(levels: &[TowerLevel], params: &ConstructionParams) -> String {
    let dto = TowerDto {
        schema_version: crate::certify::SCHEMA_VERSION.to_string(),
        params: params_dto(params),
        levels: levels.iter().map(|l| level_dto(l, None)).collect(),
    };
    json_string(&dto)
}

pub const TOWER_CSV_HEADER: &str = "index,d,p,abs_degree,log_p_lo,log_p_hi,log_d_lo,log_d_hi,generator_height_lo,generator_height_hi";

pub fn tower_to_csv(levels: &[TowerLevel]) -> String {
    let mut out = String::from(TOWER_CSV_HEADER);
    out.push('\n');
    for l in levels {
        let (lp_lo, lp_hi) = l.log_p.decimal_endpoints(DECIMAL_DIGITS);
        let (ld_lo, ld_hi) = l.log_d.decimal_endpoints(DECIMAL_DIGITS);
        let (h_lo, h_hi) = l.generator_height.decimal_endpoints(DECIMAL_DIGITS);
        out.push_str(&format!(
            "{},{},{},{},{lp_lo},{lp_hi},{ld_lo},{ld_hi},{h_lo},{h_hi}\n",
            l.index, l.d, l.p, l.abs_degree
        ));
    }
    out
}

pub fn tower_to_text(levels: &[TowerLevel]) -> String {
    let mut out = String::new();
    for l in levels {
        out.push_str(&format!(
            "level {:>3}: d = {}, p = {} ({}), [K:Q] = {}, h(gen) = {}\n",
            l.index,
            l.d,
            l.p,
            status_str(l.p_verdict.status),
            l.abs_degree,
            l.generator_height
        ));
    }
    out
}

#[derive(Serialize)]
struct WitnessResultDto {
    eta: f64,
    level_cap: u32,
    reached: bool,
    index: Option<u32>,
    b: EnclosureDto,
}

pub fn witness_to_json(outcome: &WitnessOutcome, eta: f64, level_cap: u32) -> String {
    let dto = match outcome {
        WitnessOutcome::Reached { index, b } => WitnessResultDto {
            eta,
            level_cap,
            reached: true,
            index: Some(*index),
            b: enc(b),
        },
        WitnessOutcome::NotReached { best_index, best_b } => WitnessResultDto {
            eta,
            level_cap,
            reached: false,
            index: Some(*best_index),
            b: enc(best_b),
        },
    };
    json_string(&dto)
}

pub fn witness_to_csv(outcome: &WitnessOutcome) -> String {
    let mut out = String::from("reached,index,b_lo,b_hi\n");
    let (reached, idx, b) = match outcome {
        WitnessOutcome::Reached { index, b } => (true, *index, b),
        WitnessOutcome::NotReached { best_index, best_b } => (false, *best_index, best_b),
    };
    let (lo, hi) = b.decimal_endpoints(DECIMAL_DIGITS);
    out.push_str(&format!("{reached},{idx},{lo},{hi}\n"));
    out
}

pub fn witness_to_text(outcome: &WitnessOutcome, eta: f64) -> String {
    match outcome {
        WitnessOutcome::Reached { index, b } => {
            format!("witness level {index}: b = {b} < eta = {eta}\n")
        }
        WitnessOutcome::NotReached { best_index, best_b } => format!(
            "not reached: best b = {best_b} at level {best_index} (eta = {eta})\n"
        ),
    }
}

#[derive(Serialize)]
struct ValueDto {
    value: EnclosureDto,
}

pub fn enclosure_to_json(e: &Enclosure) -> String {
    json_string(&ValueDto { value: enc(e) })
}

pub fn enclosure_to_csv(e: &Enclosure) -> String {
    let (lo, hi) = e.decimal_endpoints(DECIMAL_DIGITS);
    format!("lo,hi\n{lo},{hi}\n")
}

pub fn enclosure_to_text(e: &Enclosure) -> String {
    format!("{e}\n")
}
