use std::fmt::Write as _;
use std::time::Instant;

use billiards::analytic::{
    bounce_table_enumerated, bounce_table_formula, crossing_number, crossing_times,
};
use billiards::csp::CspError;
use billiards::verify::{verify_family, BoxIssue, PointIssue};
use billiards::walker::{reflect_steps, simulate_crossing, walk_reflect};
use billiards::{
    AnalyticError, BoardError, Box64, BoxFamily, Caps, Point64, VerifyReport, WalkError,
    CONVENTION,
};
use serde_json::{json, Map, Value};

use crate::{
    BenchArgs, BounceArgs, Cli, Command, Format, QueryArgs, QueryMethod, RationalList,
    SimulateArgs, VerifyArgs,
};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
    payload: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
            payload: None,
        }
    }

    pub fn code(&self) -> u8 {
        self.code
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    pub fn payload(&self) -> Option<&str> {
        self.payload.as_deref()
    }
}

impl From<BoardError> for Failure {
    fn from(e: BoardError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<WalkError> for Failure {
    fn from(e: WalkError) -> Self {
        Self {
            code: EXIT_CAP,
            message: e.to_string(),
            payload: None,
        }
    }
}

impl From<AnalyticError> for Failure {
    fn from(e: AnalyticError) -> Self {
        let code = match e {
            AnalyticError::LatticeCap { .. } | AnalyticError::Csp(CspError::CapExceeded { .. }) => {
                EXIT_CAP
            }
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
            payload: None,
        }
    }
}

type Outcome = Result<String, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    let caps = cli.caps();
    match &cli.command {
        Command::Simulate(args) => simulate(args, &caps),
        Command::Crossing(args) => crossing(args, &caps),
        Command::Times(args) => times(args, &caps),
        Command::Verify(args) => verify(args, &caps),
        Command::Bounce(args) => bounce(args, &caps),
        Command::Bench(args) => bench(args, &caps),
    }
}

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values always serialize");
    s.push('\n');
    s
}

/// Counts are u128 internally; JSON gets a number when it fits in u64.
fn count(m: u128) -> Value {
    u64::try_from(m).map_or_else(|_| Value::String(m.to_string()), Value::from)
}

fn rationals(list: &RationalList) -> Value {
    Value::from(list.0.iter().map(ToString::to_string).collect::<Vec<_>>())
}

fn coords(v: &Point64) -> Value {
    Value::from(v.coords().to_vec())
}

/// Fields every result object carries.
fn header(bx: &Box64, method: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert(
        "box".into(),
        Value::from(bx.sides_rational().iter().map(ToString::to_string).collect::<Vec<_>>()),
    );
    m.insert("sides".into(), Value::from(bx.sides().to_vec()));
    m.insert("scale".into(), Value::from(bx.scale()));
    m.insert("ell".into(), Value::from(bx.ell()));
    m.insert("method".into(), Value::from(method));
    m.insert("convention".into(), Value::from(CONVENTION));
    m
}

fn make_box(list: &RationalList) -> Result<Box64, Failure> {
    Ok(Box64::new(list.0.clone())?)
}

fn simulate(args: &SimulateArgs, caps: &Caps) -> Outcome {
    let bx = make_box(&args.sides)?;
    match args.format {
        Format::Json => {
            let (map, line) = walk_reflect(&bx, caps.simulation)?;
            let mut out = header(&bx, "simulation");
            out.insert(
                "polyline".into(),
                Value::from(line.vertices.iter().map(coords).collect::<Vec<_>>()),
            );
            out.insert("end_corner".into(), coords(&bx.end_corner()));
            out.insert("t_final".into(), count(map.total()));
            let visits: Vec<Value> = map
                .iter()
                .map(|(v, t)| json!({"point": coords(v), "count": t.len(), "times": t}))
                .collect();
            out.insert("visits".into(), Value::from(visits));
            Ok(render(&Value::Object(out)))
        }
        Format::Csv => {
            let mut out = String::from("t");
            for i in 1..=bx.dim() {
                let _ = write!(out, ",v{i}");
            }
            out.push('\n');
            reflect_steps(&bx, caps.simulation, |t, p| {
                let _ = write!(out, "{t}");
                for c in p {
                    let _ = write!(out, ",{c}");
                }
                out.push('\n');
            })?;
            Ok(out)
        }
        Format::Svg => {
            if bx.dim() != 2 {
                return Err(Failure::usage(format!(
                    "svg output needs a 2-dimensional box, got {} sides",
                    bx.dim()
                )));
            }
            Ok(crate::svg::render(&bx, caps.simulation, args.unfolded, args.colored)?)
        }
    }
}

fn locate(args: &QueryArgs) -> Result<(Box64, Point64), Failure> {
    let bx = make_box(&args.sides)?;
    Ok(bx.scale_point(&args.point.0)?)
}

fn elapsed_ns(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX)
}

fn crossing(args: &QueryArgs, caps: &Caps) -> Outcome {
    let (bx, v) = locate(args)?;
    let analytic = || -> Result<(u128, &'static str, u64), Failure> {
        let start = Instant::now();
        let r = crossing_number(&bx, &v)?;
        Ok((r.m, r.method.as_str(), elapsed_ns(start)))
    };
    let simulated = || -> Result<(u128, u64), Failure> {
        let start = Instant::now();
        let (m, _) = simulate_crossing(&bx, &v, caps.simulation)?;
        Ok((m, elapsed_ns(start)))
    };
    let with_point = |mut out: Map<String, Value>| {
        out.insert("point".into(), rationals(&args.point));
        out.insert("lattice_point".into(), coords(&v));
        out
    };
    match args.method {
        QueryMethod::Analytic => {
            let (m, method, _) = analytic()?;
            let mut out = with_point(header(&bx, method));
            out.insert("m".into(), count(m));
            Ok(render(&Value::Object(out)))
        }
        QueryMethod::Simulate => {
            let (m, _) = simulated()?;
            let mut out = with_point(header(&bx, "simulation"));
            out.insert("m".into(), count(m));
            Ok(render(&Value::Object(out)))
        }
        QueryMethod::Both => {
            let (am, method, ans) = analytic()?;
            let (sm, sns) = simulated()?;
            let mut out = with_point(header(&bx, method));
            out.insert("m".into(), count(am));
            out.insert("agree".into(), Value::from(am == sm));
            out.insert("analytic".into(), json!({"m": count(am), "method": method, "ns": ans}));
            out.insert("simulated".into(), json!({"m": count(sm), "method": "simulation", "ns": sns}));
            let text = render(&Value::Object(out));
            if am == sm {
                Ok(text)
            } else {
                Err(Failure {
                    code: EXIT_MISMATCH,
                    message: format!("analytic m = {am} but simulation m = {sm}"),
                    payload: Some(text),
                })
            }
        }
    }
}

fn times(args: &QueryArgs, caps: &Caps) -> Outcome {
    let (bx, v) = locate(args)?;
    let analytic = || -> Result<(u128, &'static str, Vec<i64>), Failure> {
        if bx.is_corner(&v) {
            // the start is not a recorded visit; the halt at t = ℓ is
            let r = crossing_number(&bx, &v)?;
            let t = if v == bx.end_corner() { vec![bx.ell()] } else { vec![] };
            return Ok((r.m, r.method.as_str(), t));
        }
        let r = crossing_times(&bx, &v, caps.assignments)?;
        Ok((r.m, r.method.as_str(), r.times.unwrap_or_default()))
    };
    let simulated = || -> Result<(u128, Vec<i64>), Failure> {
        Ok(simulate_crossing(&bx, &v, caps.simulation)?)
    };
    let mut out;
    match args.method {
        QueryMethod::Analytic => {
            let (m, method, t) = analytic()?;
            out = header(&bx, method);
            out.insert("m".into(), count(m));
            out.insert("times".into(), Value::from(t));
        }
        QueryMethod::Simulate => {
            let (m, t) = simulated()?;
            out = header(&bx, "simulation");
            out.insert("m".into(), count(m));
            out.insert("times".into(), Value::from(t));
        }
        QueryMethod::Both => {
            let (am, method, at) = analytic()?;
            let (sm, st) = simulated()?;
            let agree = am == sm && at == st;
            out = header(&bx, method);
            out.insert("m".into(), count(am));
            out.insert("times".into(), Value::from(at.clone()));
            out.insert("agree".into(), Value::from(agree));
            out.insert("simulated".into(), json!({"m": count(sm), "times": st}));
            if !agree {
                out.insert("point".into(), rationals(&args.point));
                out.insert("lattice_point".into(), coords(&v));
                return Err(Failure {
                    code: EXIT_MISMATCH,
                    message: format!("analytic times {at:?} but simulated {st:?}"),
                    payload: Some(render(&Value::Object(out))),
                });
            }
        }
    }
    out.insert("point".into(), rationals(&args.point));
    out.insert("lattice_point".into(), coords(&v));
    Ok(render(&Value::Object(out)))
}

fn point_issues(issues: &[PointIssue<i64>]) -> Value {
    issues
        .iter()
        .map(|p| json!({"box": p.sides, "point": p.point, "m": count(p.m), "detail": p.detail}))
        .collect()
}

fn box_issues(issues: &[BoxIssue<i64>]) -> Value {
    issues
        .iter()
        .map(|b| json!({"box": b.sides, "kind": b.kind, "detail": b.detail}))
        .collect()
}

fn report_json(report: &VerifyReport<i64>) -> Value {
    let mismatches: Vec<Value> = report
        .mismatches
        .iter()
        .map(|m| {
            json!({
                "box": m.sides,
                "point": m.point,
                "analytic_m": count(m.analytic_m),
                "simulated_m": count(m.simulated_m),
            })
        })
        .collect();
    json!({
        "convention": CONVENTION,
        "boxes_checked": report.boxes_checked,
        "points_checked": report.points_checked,
        "clean": report.is_clean(),
        "complete": report.is_complete(),
        "mismatches": mismatches,
        "theorem1_violations": point_issues(&report.theorem1_violations),
        "theorem2_violations": point_issues(&report.theorem2_violations),
        "bound_violations": point_issues(&report.bound_violations),
        "times_mismatches": point_issues(&report.times_mismatches),
        "identity_failures": box_issues(&report.identity_failures),
        "skipped": box_issues(&report.skipped),
    })
}

fn verify(args: &VerifyArgs, caps: &Caps) -> Outcome {
    let family = if !args.sides.is_empty() {
        BoxFamily::Explicit(args.sides.iter().map(make_box).collect::<Result<_, _>>()?)
    } else {
        match (args.max_dim, args.max_side) {
            (Some(max_dim), Some(max_side)) => BoxFamily::Enumerated {
                max_dim,
                max_side,
                max_lcm: args.max_lcm.unwrap_or(u64::MAX),
            },
            _ => {
                return Err(Failure::usage(
                    "verify needs --sides, or --max-dim and --max-side (optionally --max-lcm)",
                ))
            }
        }
    };
    let report = verify_family(&family, caps);
    let text = render(&report_json(&report));
    if !report.is_clean() {
        Err(Failure {
            code: EXIT_MISMATCH,
            message: "verification found disagreements".into(),
            payload: Some(text),
        })
    } else if !report.is_complete() {
        Err(Failure {
            code: EXIT_CAP,
            message: format!("{} boxes skipped by caps; report incomplete", report.skipped.len()),
            payload: Some(text),
        })
    } else {
        Ok(text)
    }
}

fn bounce(args: &BounceArgs, caps: &Caps) -> Outcome {
    let bx = make_box(&args.sides)?;
    let by_k = |t: &billiards::BounceTable| Value::from(t.by_k.iter().map(|&b| count(b)).collect::<Vec<_>>());
    if !bx.is_pairwise_coprime() {
        let table = bounce_table_enumerated(&bx, caps.lattice)?;
        let mut out = header(&bx, "enumeration");
        out.insert("by_k".into(), by_k(&table));
        out.insert(
            "notice".into(),
            Value::from("formula skipped: sides are not pairwise coprime"),
        );
        return Ok(render(&Value::Object(out)));
    }
    let formula = bounce_table_formula(&bx)?;
    if !args.check {
        let mut out = header(&bx, "formula");
        out.insert("by_k".into(), by_k(&formula));
        return Ok(render(&Value::Object(out)));
    }
    let enumerated = bounce_table_enumerated(&bx, caps.lattice)?;
    let agree = formula == enumerated;
    let mut out = header(&bx, "formula+enumeration");
    out.insert("by_k".into(), by_k(&formula));
    out.insert("enumerated".into(), by_k(&enumerated));
    out.insert("agree".into(), Value::from(agree));
    let text = render(&Value::Object(out));
    if agree {
        Ok(text)
    } else {
        Err(Failure {
            code: EXIT_MISMATCH,
            message: "bounce table formula and enumeration differ".into(),
            payload: Some(text),
        })
    }
}

fn bench(args: &BenchArgs, caps: &Caps) -> Outcome {
    let bx = make_box(&args.sides)?;
    let (bx, v) = bx.scale_point(&args.point.0)?;
    let mut samples = Vec::with_capacity(args.repeat.max(1));
    let mut m = 0;
    for _ in 0..args.repeat.max(1) {
        let start = Instant::now();
        m = crossing_number(&bx, &v)?.m;
        samples.push(elapsed_ns(start));
    }
    samples.sort_unstable();
    let analytic_ns = samples[samples.len() / 2];

    let mut out = header(&bx, "bench");
    out.insert("point".into(), rationals(&args.point));
    out.insert("lattice_point".into(), coords(&v));
    out.insert("analytic_m".into(), count(m));
    out.insert("analytic_ns".into(), Value::from(analytic_ns));
    let start = Instant::now();
    match simulate_crossing(&bx, &v, caps.simulation) {
        Ok((sm, _)) => {
            let simulate_ns = elapsed_ns(start);
            out.insert("simulated_m".into(), count(sm));
            out.insert("simulate_ns".into(), Value::from(simulate_ns));
            out.insert("agree".into(), Value::from(sm == m));
        }
        Err(WalkError::CapExceeded { .. }) => {
            out.insert("simulate_ns".into(), Value::from("skipped"));
        }
    }
    Ok(render(&Value::Object(out)))
}
