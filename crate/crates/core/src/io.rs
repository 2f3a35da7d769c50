//! JSON job inputs, report assembly, and the command runner shared by the
//! CLI and the C ABI.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bary::{self, BaryProfile, Interval};
use crate::error::{Error, ErrorKind, Result};
use crate::exact::{decimal_string, format_rational, parse_rational, Rat};
use crate::fan::Fan;
use crate::flag::{build_flag_chain, FlagChain, FlagFrame};
use crate::lattice::LatticeVector;
use crate::okounkov::{
    flag_log_discrepancies, flag_s_invariants, log_discrepancy, okounkov_body, s_t_invariants, BoundaryData,
    ToricDivisor,
};
use crate::poly::{PiecewisePolynomial, Polynomial};
use crate::polytope::from_vertices;
use crate::threshold::{self, CoupledProblem, ThresholdReport};

const DECIMAL_DIGITS: usize = 12;

/// A rational read from `"p/q"`, a decimal string, an integer, or
/// `{"exact": "p/q"}`; written as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rat);

impl Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QRepr {
    Int(i64),
    Str(String),
    Obj { exact: String },
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = match QRepr::deserialize(d)? {
            QRepr::Int(i) => Rat::from_integer(i.into()),
            QRepr::Str(s) | QRepr::Obj { exact: s } => parse_rational(&s).map_err(serde::de::Error::custom)?,
        };
        Ok(Q(r))
    }
}

fn rats(v: &[Q]) -> Vec<Rat> {
    v.iter().map(|q| q.0.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanSpec {
    /// `P1`, `P2`, `P1xP1`, `F<m>`, `P112`, `P1xF1`.
    Named(String),
    Explicit { rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>> },
}

impl FanSpec {
    pub fn build(&self) -> Result<Fan> {
        match self {
            FanSpec::Named(name) => named_fan(name),
            FanSpec::Explicit { rank, rays, cones } => {
                Fan::new(*rank, rays.iter().map(|r| LatticeVector::from_i64(r)).collect(), cones.clone())
            }
        }
    }
}

pub fn named_fan(name: &str) -> Result<Fan> {
    use crate::corpus::*;
    let f = match name {
        "P1" => p1(),
        "P2" => p2(),
        "P1xP1" => p1xp1(),
        "P112" => p112(),
        "P1xF1" => p1xf1(),
        _ => match name.strip_prefix('F').and_then(|m| m.parse::<i64>().ok()) {
            Some(m) if (0..=16).contains(&m) => hirzebruch(m),
            _ => return Err(Error::InvalidInput(format!("unknown fan name {name:?}"))),
        },
    };
    Ok(f)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameSpec {
    #[default]
    Ambient,
    Quotient,
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagSpec {
    pub vectors: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub frame: FrameSpec,
}

impl FlagSpec {
    pub fn build(&self, fan: &Fan) -> Result<FlagChain> {
        let vs: Vec<LatticeVector> = self.vectors.iter().map(|v| LatticeVector::from_i64(v)).collect();
        let frame = match self.frame {
            FrameSpec::Ambient => FlagFrame::Ambient,
            FrameSpec::Quotient => FlagFrame::Quotient,
        };
        build_flag_chain(fan, &vs, frame)
    }
}

/// Input of the divisor-level commands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryInput {
    pub fan: FanSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub weight: Q,
    pub coefficients: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub fan: FanSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<Q>>,
    pub terms: Vec<TermSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub candidates: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<FlagSpec>,
    /// Add every ordering of the rays of every maximal cone as a flag.
    #[serde(default, skip_serializing_if = "is_default")]
    pub fixed_point_flags: bool,
}

fn boundary_of(fan: &Fan, b: &Option<Vec<Q>>) -> Result<BoundaryData> {
    match b {
        Some(c) => BoundaryData::new(fan, rats(c)),
        None => Ok(BoundaryData::zero(fan)),
    }
}

impl ProblemSpec {
    pub fn build(&self, extra_candidates: &[Vec<i64>]) -> Result<CoupledProblem> {
        let fan = Arc::new(self.fan.build()?);
        let boundary = boundary_of(&fan, &self.boundary)?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.weight.0.clone(), ToricDivisor::new(fan.clone(), rats(&t.coefficients))?)))
            .collect::<Result<_>>()?;
        let mut flags: Vec<FlagChain> = self.flags.iter().map(|f| f.build(&fan)).collect::<Result<_>>()?;
        if self.fixed_point_flags {
            flags.extend(threshold::fixed_point_flags(&fan)?);
        }
        let mut cands: Vec<LatticeVector> =
            self.candidates.iter().chain(extra_candidates).map(|v| LatticeVector::from_i64(v)).collect();
        if !cands.is_empty() && self.candidates.is_empty() {
            cands.extend(fan.rays.iter().cloned());
            cands.extend(flags.iter().map(|f| f.first_vector().clone()));
        }
        CoupledProblem::new(fan, boundary, terms, cands, flags)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductInput {
    pub first: ProblemSpec,
    pub second: ProblemSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HirzebruchTerm {
    pub weight: Q,
    pub a: Q,
    pub b: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HirzebruchInput {
    pub m: u32,
    pub terms: Vec<HirzebruchTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveTerm {
    pub weight: Q,
    pub degree: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveInput {
    pub b: Q,
    pub terms: Vec<CurveTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseSpec {
    pub breakpoints: Vec<Q>,
    /// Ascending coefficients of each piece.
    pub pieces: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub dim: usize,
    pub vertices: Vec<Vec<Q>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSpec {
    pub n: usize,
    pub d: i64,
    #[serde(rename = "V0")]
    pub v0: Q,
    pub t: Q,
    pub tau: Q,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    #[default]
    Left,
    Right,
}

/// Either an explicit profile, a polytope whose first-coordinate profile
/// is computed, or the line data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaryInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1: Option<Q>,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<PiecewiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Q>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<LineSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Command {
    OkounkovBody,
    SInvariant,
    FlagS,
    LogDiscrepancy,
    Delta,
    Alpha,
    AzBound,
    ZariskiSurface,
    ProductCheck,
    Hirzebruch,
    BaryBounds,
    CurveDelta,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::OkounkovBody,
        Command::SInvariant,
        Command::FlagS,
        Command::LogDiscrepancy,
        Command::Delta,
        Command::Alpha,
        Command::AzBound,
        Command::ZariskiSurface,
        Command::ProductCheck,
        Command::Hirzebruch,
        Command::BaryBounds,
        Command::CurveDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::OkounkovBody => "okounkov-body",
            Command::SInvariant => "s-invariant",
            Command::FlagS => "flag-s",
            Command::LogDiscrepancy => "log-discrepancy",
            Command::Delta => "delta",
            Command::Alpha => "alpha",
            Command::AzBound => "az-bound",
            Command::ZariskiSurface => "zariski-surface",
            Command::ProductCheck => "product-check",
            Command::Hirzebruch => "hirzebruch",
            Command::BaryBounds => "bary-bounds",
            Command::CurveDelta => "curve-delta",
        }
    }

    pub fn from_name(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JobInput {
    Geometry(GeometryInput),
    Problem(ProblemSpec),
    Product(ProductInput),
    Hirzebruch(HirzebruchInput),
    Curve(CurveInput),
    Bary(BaryInput),
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn missing(cmd: Command, field: &str) -> Error {
    Error::InvalidInput(format!("{cmd} requires the field {field:?}"))
}

/// Parses and checks that the command's required fields are present.
pub fn parse_input(cmd: Command, text: &str) -> Result<JobInput> {
    use Command::*;
    let input = match cmd {
        OkounkovBody | SInvariant | FlagS | LogDiscrepancy | ZariskiSurface => {
            let g: GeometryInput = from_json(text)?;
            let needs_divisor = !matches!(cmd, LogDiscrepancy);
            if needs_divisor && g.divisor.is_none() {
                return Err(missing(cmd, "divisor"));
            }
            match cmd {
                OkounkovBody | FlagS if g.flag.is_none() => return Err(missing(cmd, "flag")),
                SInvariant | LogDiscrepancy if g.flag.is_none() && g.vectors.is_none() => {
                    return Err(missing(cmd, "flag or vectors"))
                }
                _ => {}
            }
            JobInput::Geometry(g)
        }
        Delta | Alpha | AzBound => JobInput::Problem(from_json(text)?),
        ProductCheck => JobInput::Product(from_json(text)?),
        Hirzebruch => JobInput::Hirzebruch(from_json(text)?),
        CurveDelta => JobInput::Curve(from_json(text)?),
        BaryBounds => {
            let b: BaryInput = from_json(text)?;
            if b.line.is_none() {
                if b.e.is_none() {
                    return Err(missing(cmd, "e"));
                }
                if b.polytope.is_none() {
                    for (f, present) in [
                        ("n", b.n.is_some()),
                        ("t0", b.t0.is_some()),
                        ("t1", b.t1.is_some()),
                        ("V", b.volume.is_some()),
                        ("g", b.g.is_some()),
                    ] {
                        if !present {
                            return Err(missing(cmd, f));
                        }
                    }
                }
                if b.w.is_some() && b.u.is_none() {
                    return Err(missing(cmd, "u"));
                }
            }
            JobInput::Bary(b)
        }
    };
    Ok(input)
}

pub fn serialize_input(input: &JobInput) -> String {
    let v = match input {
        JobInput::Geometry(x) => serde_json::to_value(x),
        JobInput::Problem(x) => serde_json::to_value(x),
        JobInput::Product(x) => serde_json::to_value(x),
        JobInput::Hirzebruch(x) => serde_json::to_value(x),
        JobInput::Curve(x) => serde_json::to_value(x),
        JobInput::Bary(x) => serde_json::to_value(x),
    }
    .expect("inputs serialize");
    serde_json::to_string_pretty(&v).expect("values serialize")
}

/// Exact value with its decimal rendering.
pub fn q(r: &Rat) -> Value {
    json!({ "exact": format_rational(r), "decimal": decimal_string(r, DECIMAL_DIGITS) })
}

fn qs(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn qm(m: &[Vec<Rat>]) -> Value {
    Value::Array(m.iter().map(|r| qs(r)).collect())
}

fn ivl(i: &Interval) -> Value {
    json!({ "lo": q(&i.lo), "hi": q(&i.hi), "exactness": i.exactness() })
}

fn lv(v: &LatticeVector) -> Value {
    Value::Array(v.coords().iter().map(|c| Value::String(c.to_string())).collect())
}

fn flag_json(f: &FlagChain) -> Value {
    json!({
        "vectors": f.vectors.iter().map(lv).collect::<Vec<_>>(),
        "tau0_rays": f.tau0_rays().iter().map(lv).collect::<Vec<_>>(),
        "m": f.m.iter().map(|r| r.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "c": qm(&f.c),
        "c_prime": qm(&f.c_prime),
        "admissible": f.admissible,
        "l_values": f.l_values.as_ref().map(|l| l.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "depth": f.depth,
    })
}

fn report_json(r: &ThresholdReport) -> Value {
    json!({
        "scope": "restricted to the supplied torus-invariant candidates",
        "delta_upper": q(&r.delta_upper),
        "alpha_upper": q(&r.alpha_upper),
        "delta_lower": r.delta_lower.as_ref().map(q),
        "certified": r.certified,
        "candidates": r.candidates.iter().map(|c| json!({
            "vector": lv(&c.vector),
            "a": q(&c.a),
            "s": qs(&c.s),
            "t": qs(&c.t),
            "delta_ratio": q(&c.delta_ratio),
            "alpha_ratio": q(&c.alpha_ratio),
        })).collect::<Vec<_>>(),
        "flags": r.flags.iter().map(|f| json!({
            "vectors": f.vectors.iter().map(lv).collect::<Vec<_>>(),
            "tau0": f.tau0,
            "levels": f.levels.iter().map(|l| json!({ "a": q(&l.a), "s": qs(&l.s), "ratio": q(&l.ratio) })).collect::<Vec<_>>(),
            "az_bound": q(&f.az_bound),
        })).collect::<Vec<_>>(),
    })
}

/// Options that do not live in the input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobOptions {
    pub precision: u32,
    /// Extra candidate vectors for the threshold commands.
    pub candidates: Vec<Vec<i64>>,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions { precision: bary::DEFAULT_PRECISION, candidates: Vec::new() }
    }
}

fn divisor_of(fan: &Arc<Fan>, g: &GeometryInput) -> Result<ToricDivisor> {
    ToricDivisor::new(fan.clone(), rats(g.divisor.as_deref().unwrap_or_default()))
}

fn execute(cmd: Command, input: &JobInput, opts: &JobOptions) -> Result<Value> {
    use Command::*;
    match (cmd, input) {
        (OkounkovBody | SInvariant | FlagS | LogDiscrepancy | ZariskiSurface, JobInput::Geometry(g)) => {
            let fan = Arc::new(g.fan.build()?);
            let flag = g.flag.as_ref().map(|f| f.build(&fan)).transpose()?;
            let vectors: Vec<LatticeVector> = match (&g.vectors, &flag) {
                (Some(vs), _) => vs.iter().map(|v| LatticeVector::from_i64(v)).collect(),
                (None, Some(f)) => f.tau0_rays(),
                (None, None) => Vec::new(),
            };
            match cmd {
                OkounkovBody => {
                    let d = divisor_of(&fan, g)?;
                    let flag = flag.expect("checked");
                    let ob = okounkov_body(&d, &flag)?;
                    let mass = ob.body.mass();
                    Ok(json!({
                        "flag": flag_json(&flag),
                        "normalized_divisor": qs(&ob.normalized.coefficients),
                        "transform": qm(&ob.transform),
                        "vertices": qm(&ob.body.vertices),
                        "vertex_count": ob.body.vertices.len(),
                        "volume": q(&mass.volume),
                        "moment_volume": q(d.moment_data()?.volume()),
                        "barycenter": mass.barycenter.as_deref().map(qs),
                    }))
                }
                SInvariant => {
                    let d = divisor_of(&fan, g)?;
                    let rows = vectors
                        .iter()
                        .map(|v| {
                            let (s, t) = s_t_invariants(&d, v)?;
                            Ok(json!({ "vector": lv(v), "s": q(&s), "t": q(&t) }))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(json!({ "volume": q(d.moment_data()?.volume()), "values": rows }))
                }
                FlagS => {
                    let d = divisor_of(&fan, g)?;
                    let flag = flag.expect("checked");
                    Ok(json!({ "flag": flag_json(&flag), "values": qs(&flag_s_invariants(&d, &flag)?) }))
                }
                LogDiscrepancy => {
                    let b = boundary_of(&fan, &g.boundary)?;
                    let rays = vectors
                        .iter()
                        .map(|v| Ok(json!({ "vector": lv(v), "a": q(&log_discrepancy(&fan, &b, &v.to_rats())?) })))
                        .collect::<Result<Vec<_>>>()?;
                    let chain = flag.as_ref().map(|f| flag_log_discrepancies(&b, f)).transpose()?;
                    Ok(json!({ "values": rays, "flag_values": chain.as_deref().map(qs) }))
                }
                ZariskiSurface => {
                    let d = divisor_of(&fan, g)?;
                    let z = threshold::zariski_surface(&fan, &d)?;
                    let mut out = json!({
                        "negative": qs(&z.negative.coefficients),
                        "positive": qs(&z.positive.coefficients),
                    });
                    if let Some(flag) = &flag {
                        let path = threshold::zariski_path(&d, flag.first_vector())?;
                        let (s1, s2) = threshold::s_via_surface_zariski(&fan, &d, flag)?;
                        out["path"] = json!({
                            "u1": q(&path.u1),
                            "t1": q(&path.t1),
                            "volume": q(&path.volume),
                            "breakpoints": qs(&path.breakpoints),
                            "pieces": path.pieces.iter().map(|p| json!({
                                "lo": q(&p.lo),
                                "hi": q(&p.hi),
                                "positive": p.positive.iter().map(|c| qs(&c.coeffs)).collect::<Vec<_>>(),
                                "negative": p.negative.iter().map(|c| qs(&c.coeffs)).collect::<Vec<_>>(),
                                "p_dot_e": qs(&p.p_dot_e.coeffs),
                            })).collect::<Vec<_>>(),
                        });
                        out["s"] = qs(&[s1, s2]);
                    }
                    Ok(out)
                }
                _ => unreachable!(),
            }
        }
        (Delta | Alpha, JobInput::Problem(p)) => {
            let prob = p.build(&opts.candidates)?;
            let r = threshold::coupled_thresholds(&prob)?;
            let mut out = report_json(&r);
            if cmd == Alpha {
                out = json!({
                    "scope": out["scope"].clone(),
                    "alpha_upper": out["alpha_upper"].clone(),
                    "candidates": out["candidates"].clone(),
                });
            }
            Ok(out)
        }
        (AzBound, JobInput::Problem(p)) => {
            let prob = p.build(&opts.candidates)?;
            if prob.flags.is_empty() {
                return Err(Error::InvalidInput("az-bound needs at least one flag".into()));
            }
            let bounds = prob.flags.iter().map(|f| threshold::az_flag_bound(&prob, f)).collect::<Result<Vec<_>>>()?;
            let r = threshold::coupled_thresholds(&prob)?;
            Ok(json!({
                "az_bounds": qs(&bounds),
                "flags": report_json(&r)["flags"].clone(),
                "delta_lower": r.delta_lower.as_ref().map(q),
            }))
        }
        (ProductCheck, JobInput::Product(pi)) => {
            let p1 = pi.first.build(&[])?;
            let p2 = pi.second.build(&[])?;
            let r = threshold::product_check(&p1, &p2)?;
            Ok(json!({ "lhs": q(&r.lhs), "rhs": q(&r.rhs), "factors": [q(&r.factors.0), q(&r.factors.1)], "equal": r.equal }))
        }
        (Hirzebruch, JobInput::Hirzebruch(h)) => {
            let terms: Vec<(Rat, Rat, Rat)> =
                h.terms.iter().map(|t| (t.weight.0.clone(), t.a.0.clone(), t.b.0.clone())).collect();
            let o = threshold::hirzebruch_oracle(h.m, &terms)?;
            let r = threshold::coupled_thresholds(&threshold::hirzebruch_problem(h.m, &terms)?)?;
            Ok(json!({
                "p": qs(&o.p),
                "q": qs(&o.q),
                "delta": q(&o.delta),
                "engine_delta_upper": q(&r.delta_upper),
                "engine_certified": r.certified,
                "agree": r.delta_upper == o.delta,
            }))
        }
        (CurveDelta, JobInput::Curve(c)) => {
            let terms: Vec<(Rat, Rat)> = c.terms.iter().map(|t| (t.weight.0.clone(), t.degree.0.clone())).collect();
            let d = threshold::curve_delta(&c.b.0, &terms)?;
            let r = threshold::coupled_thresholds(&threshold::curve_problem(&c.b.0, &terms)?)?;
            Ok(json!({
                "delta": q(&d),
                "engine_delta_upper": q(&r.delta_upper),
                "engine_certified": r.certified,
                "agree": r.delta_upper == d,
            }))
        }
        (BaryBounds, JobInput::Bary(b)) => bary_job(b, opts.precision),
        _ => Err(Error::Internal("input kind does not match the command".into())),
    }
}

fn bary_job(b: &BaryInput, bits: u32) -> Result<Value> {
    if let Some(l) = &b.line {
        let v = bary::line_s_lower_bound(l.n, l.d, &l.v0.0, &l.t.0, &l.tau.0, bits)?;
        return Ok(json!({ "line_s_lower_bound": ivl(&v) }));
    }
    let e = b.e.clone().expect("checked").0;
    let (mut profile, exact_b1) = if let Some(pt) = &b.polytope {
        let pts: Vec<Vec<Rat>> = pt.vertices.iter().map(|v| rats(v)).collect();
        let poly = from_vertices(pt.dim, &pts)?;
        let sp = poly.slice_profile(0)?;
        let mut p = BaryProfile::from_slice_profile(&sp, pt.dim, e, b.side == Side::Right)?;
        if let Some(v) = &b.v {
            p.v = v.0.clone();
        }
        (p, Some(sp.barycenter.clone()))
    } else {
        let gs = b.g.as_ref().expect("checked");
        let pieces = gs.pieces.iter().map(|c| Polynomial::new(rats(c))).collect();
        let g = PiecewisePolynomial::new(rats(&gs.breakpoints), pieces)?;
        let v = match &b.v {
            Some(v) => v.0.clone(),
            None => g
                .one_sided_derivative(&e, b.side == Side::Right)
                .ok_or_else(|| Error::InvalidInput("slope at e is undefined".into()))?,
        };
        let p = BaryProfile::new(
            b.n.expect("checked"),
            b.t0.clone().expect("checked").0,
            b.t1.clone().expect("checked").0,
            b.volume.clone().expect("checked").0,
            g,
            e,
            v,
        )?;
        (p, None)
    };
    let mut out = json!({ "v": q(&profile.v) });
    let s0 = bary::lower_bound_s0(&profile, bits)?;
    out["s0"] = ivl(&s0.point);
    out["lower_bound_s0"] = ivl(&s0.bound);
    if let Some(t) = &b.t {
        profile = profile.with_t(t.0.clone());
        let h1 = bary::lower_bound_h1(&profile, bits)?;
        out["s1"] = ivl(&h1.point);
        out["lower_bound_h1"] = ivl(&h1.bound);
    }
    if let Some(u) = &b.u {
        let w = match &b.w {
            Some(w) => w.0.clone(),
            None => bary::minimal_w(&profile, &u.0, bits)?.hi,
        };
        profile = profile.with_u_w(u.0.clone(), w.clone());
        out["w"] = q(&w);
        out["upper_bound_h2"] = ivl(&bary::upper_bound_h2(&profile, bits)?);
    }
    if let Some(b1) = exact_b1 {
        out["exact_b1"] = q(&b1);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    /// Pretty JSON followed by a newline.
    pub report: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e.kind() {
        ErrorKind::Validation => 2,
        ErrorKind::Mathematical => 3,
        ErrorKind::Internal => 1,
    }
}

fn kind_name(k: ErrorKind) -> &'static str {
    match k {
        ErrorKind::Validation => "validation",
        ErrorKind::Mathematical => "mathematical",
        ErrorKind::Internal => "internal",
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn error_report(cmd: Option<Command>, e: &Error) -> Outcome {
    let v = json!({
        "command": cmd.map(Command::name),
        "status": "error",
        "error": { "name": e.name(), "kind": kind_name(e.kind()), "message": e.to_string() },
    });
    Outcome { exit_code: exit_code(e), report: render(&v) }
}

/// Runs one job on the given JSON text.
pub fn run_str(cmd: Command, text: &str, opts: &JobOptions) -> Outcome {
    let result = parse_input(cmd, text).and_then(|input| execute(cmd, &input, opts));
    match result {
        Ok(v) => Outcome {
            exit_code: 0,
            report: render(&json!({ "command": cmd.name(), "status": "ok", "result": v })),
        },
        Err(e) => error_report(Some(cmd), &e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    /// `None` reads stdin.
    pub input_path: Option<std::path::PathBuf>,
    /// `None` writes to stdout.
    pub output_path: Option<std::path::PathBuf>,
    pub options: JobOptions,
}

/// Reads the input and runs the job; writing is left to the caller.
pub fn run(job: &JobSpec) -> Outcome {
    let read = match &job.input_path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display())),
        None => std::io::read_to_string(std::io::stdin()).map_err(|e| format!("cannot read stdin: {e}")),
    };
    match read {
        Ok(text) => run_str(job.command, &text, &job.options),
        Err(msg) => error_report(Some(job.command), &Error::InvalidInput(msg)),
    }
}

/// A bundled example with the expected exact values at JSON pointers.
pub struct CorpusCase {
    pub name: &'static str,
    pub command: Command,
    pub input: &'static str,
    pub expected: &'static [(&'static str, &'static str)],
}

const P1XF1_FLAG: &str = r#"{"fan": "P1xF1", "divisor": [0, 0, 0, 1, 2, 1],
  "flag": {"vectors": [[1, 3, -1], [1, 0, 0], [0, 0, -1]]}}"#;

pub const CORPUS: &[CorpusCase] = &[
    CorpusCase {
        name: "P1xF1 flag S-invariants",
        command: Command::FlagS,
        input: P1XF1_FLAG,
        expected: &[("/result/values/0", "59/18"), ("/result/values/1", "1/2"), ("/result/values/2", "4/27")],
    },
    CorpusCase {
        name: "P1xF1 ray S-invariants",
        command: Command::SInvariant,
        input: P1XF1_FLAG,
        expected: &[("/result/values/0/s", "7/9"), ("/result/values/1/s", "1/2"), ("/result/values/2/s", "4/9")],
    },
    CorpusCase {
        name: "P1xF1 Okounkov body",
        command: Command::OkounkovBody,
        input: P1XF1_FLAG,
        expected: &[
            ("/result/flag/m/2/2", "3"),
            ("/result/flag/c_prime/0/0", "3"),
            ("/result/flag/c_prime/0/1", "1"),
            ("/result/flag/c_prime/0/2", "1"),
            ("/result/flag/c_prime/1/1", "1"),
            ("/result/flag/c_prime/1/2", "0"),
            ("/result/flag/c_prime/2/2", "1/3"),
            ("/result/vertex_count", "8"),
            ("/result/volume", "3/2"),
            ("/result/moment_volume", "3/2"),
        ],
    },
    CorpusCase {
        name: "P1xF1 flag log discrepancies",
        command: Command::LogDiscrepancy,
        input: r#"{"fan": "P1xF1", "flag": {"vectors": [[1, 3, -1], [1, 0, 0], [0, 0, -1]]}}"#,
        expected: &[("/result/flag_values/0", "5"), ("/result/flag_values/1", "1"), ("/result/flag_values/2", "1/3")],
    },
    CorpusCase {
        name: "P1xF1 chain bound",
        command: Command::AzBound,
        input: r#"{"fan": "P1xF1", "terms": [{"weight": 1, "coefficients": [0, 0, 0, 1, 2, 1]}],
  "flags": [{"vectors": [[1, 3, -1], [1, 0, 0], [0, 0, -1]]}]}"#,
        expected: &[("/result/az_bounds/0", "90/59")],
    },
    CorpusCase {
        name: "F1 anticanonical delta",
        command: Command::Delta,
        input: r#"{"fan": "F1", "terms": [{"weight": 1, "coefficients": [3, 2, 0, 0]}], "fixed_point_flags": true}"#,
        expected: &[("/result/delta_upper", "6/7"), ("/result/delta_lower", "6/7"), ("/result/certified", "true")],
    },
    CorpusCase {
        name: "F1 chain along E",
        command: Command::AzBound,
        input: r#"{"fan": "F1", "terms": [{"weight": 1, "coefficients": [3, 2, 0, 0]}],
  "flags": [{"vectors": [[0, 1], [1, 0]]}]}"#,
        expected: &[
            ("/result/flags/0/levels/0/s/0", "7/6"),
            ("/result/flags/0/levels/1/s/0", "13/12"),
            ("/result/az_bounds/0", "6/7"),
        ],
    },
    CorpusCase {
        name: "P2 coordinate chain",
        command: Command::AzBound,
        input: r#"{"fan": "P2", "terms": [{"weight": 1, "coefficients": [0, 0, 1]}],
  "flags": [{"vectors": [[1, 0], [0, 1]]}]}"#,
        expected: &[("/result/az_bounds/0", "3")],
    },
    CorpusCase {
        name: "P1xP1 two terms",
        command: Command::Hirzebruch,
        input: r#"{"m": 0, "terms": [{"weight": 1, "a": 1, "b": 1}, {"weight": 1, "a": 1, "b": 1}]}"#,
        expected: &[("/result/delta", "1"), ("/result/engine_delta_upper", "1"), ("/result/engine_certified", "true")],
    },
    CorpusCase {
        name: "Hirzebruch closed forms",
        command: Command::Hirzebruch,
        input: r#"{"m": 1, "terms": [{"weight": 1, "a": 3, "b": 1}]}"#,
        expected: &[("/result/p/0", "8/3"), ("/result/q/0", "1/3"), ("/result/agree", "true")],
    },
    CorpusCase {
        name: "F1 Zariski path",
        command: Command::ZariskiSurface,
        input: r#"{"fan": "F1", "divisor": [3, 2, 0, 0], "flag": {"vectors": [[0, 1], [1, 0]]}}"#,
        expected: &[("/result/s/0", "7/6"), ("/result/s/1", "13/12"), ("/result/negative/1", "0")],
    },
    CorpusCase {
        name: "F1 Zariski decomposition",
        command: Command::ZariskiSurface,
        input: r#"{"fan": "F1", "divisor": [3, 4, 0, 0]}"#,
        expected: &[("/result/negative/1", "1"), ("/result/positive/1", "3"), ("/result/positive/0", "3")],
    },
    CorpusCase {
        name: "curve threshold",
        command: Command::CurveDelta,
        input: r#"{"b": "1/2", "terms": [{"weight": 1, "degree": 1}, {"weight": "1/2", "degree": 2}]}"#,
        expected: &[("/result/delta", "1/2"), ("/result/agree", "true")],
    },
    CorpusCase {
        name: "P1 x F1 product",
        command: Command::ProductCheck,
        input: r#"{"first": {"fan": "P1", "terms": [{"weight": 1, "coefficients": [1, 1]}]},
  "second": {"fan": "F1", "terms": [{"weight": 1, "coefficients": [3, 2, 0, 0]}]}}"#,
        expected: &[("/result/rhs", "6/7"), ("/result/lhs", "6/7"), ("/result/equal", "true")],
    },
    CorpusCase {
        name: "square barycenter bounds",
        command: Command::BaryBounds,
        input: r#"{"polytope": {"dim": 2, "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}, "e": "1/2", "t": 1, "u": 1, "w": 1}"#,
        expected: &[
            ("/result/lower_bound_s0/lo", "1/2"),
            ("/result/lower_bound_h1/lo", "1/2"),
            ("/result/upper_bound_h2/hi", "1/2"),
        ],
    },
    CorpusCase {
        name: "simplex barycenter bounds",
        command: Command::BaryBounds,
        input: r#"{"polytope": {"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}, "e": "1/2", "side": "right", "t": 1, "u": 1, "w": 0}"#,
        expected: &[
            ("/result/lower_bound_s0/lo", "1/3"),
            ("/result/lower_bound_h1/lo", "1/3"),
            ("/result/upper_bound_h2/hi", "1/3"),
        ],
    },
];

/// Value at a pointer as a comparable string: the exact form of rationals,
/// the plain form of other scalars.
pub fn pointer_value(report: &Value, pointer: &str) -> Option<String> {
    let v = report.pointer(pointer)?;
    Some(match v {
        Value::Object(m) if m.contains_key("exact") => m["exact"].as_str()?.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRow {
    pub name: &'static str,
    pub pointer: &'static str,
    pub expected: &'static str,
    pub found: Option<String>,
    pub pass: bool,
}

pub fn run_corpus(opts: &JobOptions) -> Vec<CorpusRow> {
    let mut rows = Vec::new();
    for case in CORPUS {
        let out = run_str(case.command, case.input, opts);
        let v: Value = serde_json::from_str(&out.report).expect("reports are JSON");
        for &(pointer, expected) in case.expected {
            let found = pointer_value(&v, pointer);
            let pass = out.exit_code == 0 && found.as_deref() == Some(expected);
            rows.push(CorpusRow { name: case.name, pointer, expected, found, pass });
        }
    }
    rows
}

pub fn corpus_table(rows: &[CorpusRow]) -> String {
    let mut s = String::new();
    for r in rows {
        s.push_str(&format!(
            "{}  {:<32} {:<28} expected {:<8} found {}\n",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.pointer,
            r.expected,
            r.found.as_deref().unwrap_or("-")
        ));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    s.push_str(&format!("{passed}/{} checks passed\n", rows.len()));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes() {
        let rows = run_corpus(&JobOptions::default());
        let failed: Vec<_> = rows.iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{}", corpus_table(&rows));
    }

    #[test]
    fn round_trip() {
        for case in CORPUS {
            let a = parse_input(case.command, case.input).unwrap();
            let b = parse_input(case.command, &serialize_input(&a)).unwrap();
            assert_eq!(a, b, "{}", case.name);
        }
    }

    #[test]
    fn exit_codes() {
        let o = run_str(Command::FlagS, r#"{"fan": {"rank": 2, "rays": [[2, 0], [0, 1], [-1, -1]], "cones": [[0, 1], [1, 2], [2, 0]]}, "divisor": [0, 0, 1], "flag": {"vectors": [[0, 1]]}}"#, &JobOptions::default());
        assert_eq!(o.exit_code, 2);
        assert!(o.report.contains("NonPrimitiveRay"));
        let o = run_str(Command::Delta, r#"{"fan": "P2", "terms": [{"weight": 1, "coefficients": [0, 0, 0]}]}"#, &JobOptions::default());
        assert_eq!(o.exit_code, 3);
        assert!(o.report.contains("NotBig"));
        let o = run_str(Command::Delta, "{", &JobOptions::default());
        assert_eq!(o.exit_code, 2);
        assert!(o.report.contains("ParseError"));
        let o = run_str(Command::FlagS, r#"{"fan": "P2", "divisor": [0, 0, 1]}"#, &JobOptions::default());
        assert_eq!(o.exit_code, 2);
        let o = run_str(Command::CurveDelta, r#"{"b": 0.5, "terms": []}"#, &JobOptions::default());
        assert_eq!(o.exit_code, 2);
    }

    #[test]
    fn deterministic() {
        let a = run_str(Command::Delta, CORPUS[5].input, &JobOptions::default());
        let b = run_str(Command::Delta, CORPUS[5].input, &JobOptions::default());
        assert_eq!(a, b);
    }
}
