//! Data model and pipeline: from declarative block, gluing and
//! configuration data to the assembled `nu_bar` and its report.
//!
//! The sum being assembled is
//!
//! ```text
//! nu_bar = D_+ + D_- + F_+ + F_- - 72 rho / pi + 3 m_rho
//! ```
//!
//! with `rho = pi - 2 theta` for the gluing angle `theta`. The result must
//! be an integer; a violation beyond tolerance is a hard error and signals
//! inconsistent input data. All JSON files carry `"schema": "etcs/1"`.

use std::path::Path;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angles::{m_rho as m_rho_count, AngleError, AngleSpectrum, ExactAngle};
use crate::config::{ConfigError, Configuration, Side};
use crate::dedekind::{dedekind_sum, DedekindError, FixedPointSet};
use crate::defect::{g2_bordism_check, nu_from_nu_bar, Residue};
use crate::eta::{f_contribution, EtaError, EtaParams};
use crate::gluing::{GluingData, GluingError, TorusCase};
use crate::hyperbolic::{
    nu_bar_via_polygon, AngleExpr, BoundaryPoint, CuspCorner, HyperPolygon, HyperbolicError,
    InteriorAngle,
};
use crate::lattice::{GramMatrix, LatticeError};
use crate::linalg::Q;

pub const SCHEMA: &str = "etcs/1";

#[derive(Debug, Error)]
pub enum AssembleError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {path} at {location}: {message}")]
    Parse { path: String, location: String, message: String },
    #[error("{path}: schema version mismatch: expected {SCHEMA:?}, found {found:?}")]
    SchemaVersion { path: String, found: String },
    #[error("{path}: {rule}")]
    Invariant { path: String, rule: String },
    #[error("gluing excludes assembly: {0}")]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Eta(#[from] EtaError),
    #[error(transparent)]
    Dedekind(#[from] DedekindError),
    #[error(transparent)]
    Hyperbolic(#[from] HyperbolicError),
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error("the gluing matrix aligns the external circles (theta = 0): no closed G2-manifold")]
    AlignedGluing,
    #[error("gluing angle cos^2 = {gluing} is not an eigenvalue of the configuration (spectrum {spectrum})")]
    Cos2Mismatch { gluing: String, spectrum: String },
    #[error("nu_bar = {value} is {distance:e} away from the nearest integer (tolerance {tol:e}); input data is inconsistent")]
    IntegralityViolation { value: f64, distance: f64, tol: f64 },
}

/// Serde helpers writing rationals as strings like "a/b" (or "a").
pub mod qstring {
    use num_rational::BigRational;
    use num_traits::Zero;
    use serde::{de, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        if v.denom() == &num_bigint::BigInt::from(1) {
            s.serialize_str(&v.numer().to_string())
        } else {
            s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(BigRational::from_integer(n.into())),
            Raw::Str(text) => parse(&text).map_err(de::Error::custom),
        }
    }

    pub fn parse(text: &str) -> Result<BigRational, String> {
        let text = text.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let n = num_bigint::BigInt::from_str(num)
            .map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = num_bigint::BigInt::from_str(den)
            .map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(n, d))
    }
}

/// One building block: its polarising lattice, the order and internal-circle
/// unit of the cyclic symmetry, and the isolated fixed-point data.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct BlockRecord {
    #[serde(default = "default_schema", skip_serializing_if = "is_default_schema")]
    pub schema: String,
    pub name: String,
    pub polarising_gram: Vec<Vec<i64>>,
    pub k: u32,
    pub eps: i32,
    #[serde(default)]
    pub fixed_points: Option<FixedPointSet>,
    #[serde(default)]
    pub notes: String,
}

fn default_schema() -> String {
    SCHEMA.to_string()
}

fn is_default_schema(s: &str) -> bool {
    s == SCHEMA
}

impl BlockRecord {
    pub fn gram(&self) -> Result<GramMatrix, LatticeError> {
        GramMatrix::from_i64(&self.polarising_gram)
    }

    pub fn fixed_point_set(&self) -> FixedPointSet {
        self.fixed_points.clone().unwrap_or_else(|| FixedPointSet::empty(self.k))
    }

    pub fn validate(&self, path: &str) -> Result<(), AssembleError> {
        check_schema(&self.schema, path)?;
        self.gram().map_err(|e| AssembleError::Invariant {
            path: format!("{path}.polarising_gram"),
            rule: e.to_string(),
        })?;
        let fps = self.fixed_point_set();
        if fps.k != self.k {
            return Err(AssembleError::Invariant {
                path: format!("{path}.fixed_points.k"),
                rule: format!("must equal the block order {} but is {}", self.k, fps.k),
            });
        }
        if self.k <= 2 && !fps.entries.is_empty() {
            return Err(AssembleError::Invariant {
                path: format!("{path}.fixed_points.entries"),
                rule: "must be empty for k <= 2: no isolated fixed points exist".into(),
            });
        }
        fps.validate().map_err(|e| AssembleError::Invariant {
            path: format!("{path}.fixed_points"),
            rule: e.to_string(),
        })?;
        Ok(())
    }
}

/// Gluing data as serialized: `G = [[m, p], [n, q]]`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct GluingDto {
    #[serde(default = "default_schema", skip_serializing_if = "is_default_schema")]
    pub schema: String,
    pub k_plus: u32,
    pub eps_plus: i32,
    pub k_minus: u32,
    pub eps_minus: i32,
    #[serde(rename = "G")]
    pub g: [[i64; 2]; 2],
}

impl GluingDto {
    pub fn to_gluing(&self) -> GluingData {
        GluingData {
            k_plus: self.k_plus,
            eps_plus: self.eps_plus,
            k_minus: self.k_minus,
            eps_minus: self.eps_minus,
            m: self.g[0][0],
            p: self.g[0][1],
            n: self.g[1][0],
            q: self.g[1][1],
        }
    }

    pub fn from_gluing(g: &GluingData) -> GluingDto {
        GluingDto {
            schema: default_schema(),
            k_plus: g.k_plus,
            eps_plus: g.eps_plus,
            k_minus: g.k_minus,
            eps_minus: g.eps_minus,
            g: [[g.m, g.p], [g.n, g.q]],
        }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ConfigurationDto {
    #[serde(default = "default_schema", skip_serializing_if = "is_default_schema")]
    pub schema: String,
    pub gram: Vec<Vec<i64>>,
    pub r_plus: usize,
    pub r_minus: usize,
}

impl ConfigurationDto {
    pub fn to_configuration(&self, path: &str) -> Result<Configuration, AssembleError> {
        check_schema(&self.schema, path)?;
        let gram = GramMatrix::from_i64(&self.gram).map_err(|e| AssembleError::Invariant {
            path: format!("{path}.gram"),
            rule: e.to_string(),
        })?;
        Configuration::new(gram, self.r_plus, self.r_minus).map_err(|e| {
            AssembleError::Invariant { path: path.to_string(), rule: e.to_string() }
        })
    }
}

/// Optional instance-level overrides for configurations whose angle data is
/// only available from external sources.
#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct Overrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_rho: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_minus: Option<Vec<ExactAngle>>,
}

/// One extra-twisted connected sum: two blocks, a torus gluing and a
/// configuration of the polarising lattices.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct EtcsInstance {
    #[serde(default = "default_schema", skip_serializing_if = "is_default_schema")]
    pub schema: String,
    pub name: String,
    pub block_plus: BlockRecord,
    pub block_minus: BlockRecord,
    pub gluing: GluingDto,
    pub configuration: ConfigurationDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overrides: Option<Overrides>,
    #[serde(default)]
    pub b1: u32,
}

impl EtcsInstance {
    pub fn validate(&self) -> Result<(), AssembleError> {
        check_schema(&self.schema, "instance")?;
        self.block_plus.validate("block_plus")?;
        self.block_minus.validate("block_minus")?;
        let g = self.gluing.to_gluing();
        let report = g.validate();
        if !report.passes() {
            return Err(AssembleError::Invariant {
                path: "gluing".into(),
                rule: format!("constraint check failed: {report:?}"),
            });
        }
        for (side, block, k, eps) in [
            ("plus", &self.block_plus, g.k_plus, g.eps_plus),
            ("minus", &self.block_minus, g.k_minus, g.eps_minus),
        ] {
            if block.k != k {
                return Err(AssembleError::Invariant {
                    path: format!("gluing.k_{side}"),
                    rule: format!("is {k} but block_{side}.k is {}", block.k),
                });
            }
            if block.eps != eps {
                return Err(AssembleError::Invariant {
                    path: format!("gluing.eps_{side}"),
                    rule: format!("is {eps} but block_{side}.eps is {}", block.eps),
                });
            }
        }
        let cfg = self.configuration.to_configuration("configuration")?;
        let plus_rank = self.block_plus.polarising_gram.len();
        let minus_rank = self.block_minus.polarising_gram.len();
        if cfg.r_plus() != plus_rank || cfg.r_minus() != minus_rank {
            return Err(AssembleError::Invariant {
                path: "configuration".into(),
                rule: format!(
                    "block ranks ({}, {}) do not match polarising lattice ranks ({plus_rank}, {minus_rank})",
                    cfg.r_plus(),
                    cfg.r_minus()
                ),
            });
        }
        for (side, block, which) in
            [(Side::Plus, &self.block_plus, "plus"), (Side::Minus, &self.block_minus, "minus")]
        {
            let sub = cfg.block(side);
            let expected = block.gram()?.to_qmat();
            if sub != expected {
                return Err(AssembleError::Invariant {
                    path: format!("configuration.gram ({which} block)"),
                    rule: format!("does not equal block_{which}.polarising_gram"),
                });
            }
        }
        Ok(())
    }

    pub fn configuration(&self) -> Result<Configuration, AssembleError> {
        self.configuration.to_configuration("configuration")
    }
}

fn check_schema(found: &str, path: &str) -> Result<(), AssembleError> {
    if found == SCHEMA {
        Ok(())
    } else {
        Err(AssembleError::SchemaVersion { path: path.to_string(), found: found.to_string() })
    }
}

/// Numeric tolerances of the assembly.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Tolerances {
    /// Series evaluation tolerance for the eta contributions.
    pub series: f64,
    /// Allowed distance of the assembled sum from the nearest integer.
    pub integrality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { series: 1e-12, integrality: 1e-6 }
    }
}

/// All terms of the assembled invariant, plus the derived residue data.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct NuBarReport {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub instance: String,
    pub case: TorusCase,
    #[serde(with = "qstring")]
    pub d_plus: Q,
    #[serde(with = "qstring")]
    pub d_minus: Q,
    pub f_plus: f64,
    pub f_plus_error: f64,
    pub f_minus: f64,
    pub f_minus_error: f64,
    pub theta: f64,
    pub rho: f64,
    #[serde(with = "qstring")]
    pub cos2_theta: Q,
    pub m_rho: i64,
    pub nu_bar_real: f64,
    pub nu_bar: i64,
    pub nu_mod48: Residue,
    pub g2_nullbordant: bool,
    pub b1: u32,
}

/// Assemble `nu_bar` for an instance.
pub fn assemble_nu_bar(
    inst: &EtcsInstance,
    tol: &Tolerances,
) -> Result<NuBarReport, AssembleError> {
    inst.validate()?;
    let gluing = inst.gluing.to_gluing();
    let geom = gluing.derive()?;
    if geom.case == TorusCase::ThetaZeroExcluded {
        return Err(AssembleError::AlignedGluing);
    }
    let cfg = inst.configuration()?;
    let spectrum = cfg.gluing_angle_cos2()?;
    if !spectrum.contains(&geom.cos2_theta) {
        return Err(AssembleError::Cos2Mismatch {
            gluing: geom.cos2_theta.to_string(),
            spectrum: format!("{:?}", spectrum.rational),
        });
    }
    let theta = geom.theta;
    let rho = geom.rho();
    let rho_cos = geom.rho_boundary_cos();

    let d_term = |block: &BlockRecord| -> Result<Q, AssembleError> {
        let sum = dedekind_sum(&block.fixed_point_set(), tol.series)?;
        Ok(sum.rational.unwrap_or_else(|| {
            crate::rational::reconstruct_f64(sum.value, 1_000_000, 1e-6)
                .unwrap_or_else(Q::zero)
        }))
    };
    let d_plus = d_term(&inst.block_plus)?;
    let d_minus = d_term(&inst.block_minus)?;

    let f_term = |k: u32, eps: i32, s_sq: Option<&Q>| -> Result<(f64, f64), AssembleError> {
        if k <= 2 {
            // rectangular and rhombic families contribute nothing
            return Ok((0.0, 0.0));
        }
        let s_sq = s_sq.ok_or(GluingError::FreeRatios)?;
        let params = EtaParams::new(k, eps, s_sq.clone())?;
        let f = f_contribution(&params, tol.series)?;
        Ok((f.value, f.error_bound))
    };
    let (f_plus, f_plus_error) =
        f_term(gluing.k_plus, gluing.eps_plus, geom.s_plus_sq.as_ref())?;
    let (f_minus, f_minus_error) =
        f_term(gluing.k_minus, gluing.eps_minus, geom.s_minus_sq.as_ref())?;

    let overrides = inst.overrides.clone().unwrap_or_default();
    let m_rho = if rho == 0.0 {
        0
    } else if let Some(m) = overrides.m_rho {
        m
    } else {
        let mut spectrum = cfg.configuration_angles()?;
        if let Some(alpha) = overrides.alpha_minus {
            spectrum = AngleSpectrum { alpha_plus: spectrum.alpha_plus, alpha_minus: alpha };
        }
        m_rho_count(&spectrum, rho, Some(&rho_cos))?
    };

    let nu_bar_real = d_plus.to_f64().unwrap()
        + d_minus.to_f64().unwrap()
        + f_plus
        + f_minus
        - 72.0 * rho / std::f64::consts::PI
        + 3.0 * m_rho as f64;
    let nu_bar = nu_bar_real.round();
    let distance = (nu_bar_real - nu_bar).abs();
    if distance > tol.integrality {
        return Err(AssembleError::IntegralityViolation {
            value: nu_bar_real,
            distance,
            tol: tol.integrality,
        });
    }
    let nu_mod48 = nu_from_nu_bar(nu_bar as i64, inst.b1 as u64);
    Ok(NuBarReport {
        schema: default_schema(),
        instance: inst.name.clone(),
        case: geom.case,
        d_plus,
        d_minus,
        f_plus,
        f_plus_error,
        f_minus,
        f_minus_error,
        theta,
        rho,
        cos2_theta: geom.cos2_theta.clone(),
        m_rho,
        nu_bar_real,
        nu_bar: nu_bar as i64,
        nu_mod48,
        g2_nullbordant: g2_bordism_check(&nu_mod48),
        b1: inst.b1,
    })
}

/// Outcome of checking an instance against its polygon computation.
#[derive(Clone, PartialEq, Debug)]
pub struct CrossCheckReport {
    pub assembled: NuBarReport,
    pub polygon_value: f64,
    pub polygon_exact: Option<Q>,
    /// `polygon - assembled`
    pub delta: f64,
    pub passes: bool,
}

/// Compare the assembled value against the independent polygon route.
pub fn cross_check(
    inst: &EtcsInstance,
    polygon: &HyperPolygon,
    tol: f64,
) -> Result<CrossCheckReport, AssembleError> {
    let assembled = assemble_nu_bar(inst, &Tolerances::default())?;
    let rho_expr = if assembled.rho == 0.0 {
        AngleExpr::zero()
    } else {
        AngleExpr::pi_minus_two_theta()
    };
    let polygon_nu = nu_bar_via_polygon(
        polygon,
        &rho_expr,
        assembled.m_rho,
        &assembled.d_plus,
        &assembled.d_minus,
    )?;
    let polygon_value = polygon_nu.eval(assembled.theta);
    let delta = polygon_value - assembled.nu_bar_real;
    Ok(CrossCheckReport {
        polygon_exact: polygon_nu.exact,
        assembled,
        polygon_value,
        delta,
        passes: delta.abs() <= tol,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Deterministic rendering of a report. The text format lists each term of
/// the assembled sum on its own line.
pub fn render_report(report: &NuBarReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Text => {
            let mut out = String::new();
            let mut line = |s: String| {
                out.push_str(&s);
                out.push('\n');
            };
            line(format!("instance: {}", report.instance));
            line(format!("case: {:?}", report.case));
            line(format!("cos2_theta: {}", report.cos2_theta));
            line(format!("theta: {:.12}", report.theta));
            line(format!("rho: {:.12}  # pi - 2 theta", report.rho));
            line(format!("D_plus: {}  # Dedekind sum of the plus block", report.d_plus));
            line(format!("D_minus: {}  # Dedekind sum of the minus block", report.d_minus));
            line(format!(
                "F_plus: {:.12}  # torus contribution, err <= {:.1e}",
                report.f_plus, report.f_plus_error
            ));
            line(format!(
                "F_minus: {:.12}  # torus contribution, err <= {:.1e}",
                report.f_minus, report.f_minus_error
            ));
            line(format!("rho_term: {:.12}  # -72 rho / pi", -72.0 * report.rho / std::f64::consts::PI));
            line(format!("m_rho: {}", report.m_rho));
            line(format!("m_rho_term: {}  # 3 m_rho", 3 * report.m_rho));
            line(format!("nu_bar_real: {:.12}", report.nu_bar_real));
            line(format!("nu_bar: {}", report.nu_bar));
            line(format!("nu_mod48: {}", report.nu_mod48.value));
            line(format!("g2_nullbordant: {}", report.g2_nullbordant));
            line(format!("b1: {}", report.b1));
            out
        }
    }
}

// ---------------------------------------------------------------------------
// file loading

fn read_file(path: &Path) -> Result<String, AssembleError> {
    std::fs::read_to_string(path).map_err(|source| AssembleError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(
    text: &str,
    path: &Path,
) -> Result<T, AssembleError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| AssembleError::Parse {
        path: path.display().to_string(),
        location: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn load_block(path: &Path) -> Result<BlockRecord, AssembleError> {
    let block: BlockRecord = parse_json(&read_file(path)?, path)?;
    block.validate("block")?;
    Ok(block)
}

pub fn load_gluing(path: &Path) -> Result<GluingData, AssembleError> {
    let dto: GluingDto = parse_json(&read_file(path)?, path)?;
    check_schema(&dto.schema, &path.display().to_string())?;
    Ok(dto.to_gluing())
}

pub fn load_configuration(path: &Path) -> Result<Configuration, AssembleError> {
    let dto: ConfigurationDto = parse_json(&read_file(path)?, path)?;
    dto.to_configuration(&path.display().to_string())
}

pub fn load_instance(path: &Path) -> Result<EtcsInstance, AssembleError> {
    let inst: EtcsInstance = parse_json(&read_file(path)?, path)?;
    inst.validate()?;
    Ok(inst)
}

// polygon serialization

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CuspDto {
    base: String,
    x: String,
    y: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PolygonDto {
    #[serde(default = "default_schema")]
    schema: String,
    cusps: Vec<CuspDto>,
    #[serde(default)]
    interior_angles: Vec<InteriorAngle>,
    n_sides: usize,
    #[serde(default)]
    gamma_edges: Vec<[String; 2]>,
}

fn parse_boundary(text: &str, path: &Path) -> Result<BoundaryPoint, AssembleError> {
    let text = text.trim();
    if text == "inf" || text == "oo" || text == "infinity" {
        return Ok(BoundaryPoint::Infinity);
    }
    qstring::parse(text)
        .map(BoundaryPoint::Rational)
        .map_err(|message| AssembleError::Parse {
            path: path.display().to_string(),
            location: "boundary point".into(),
            message,
        })
}

pub fn load_polygon(path: &Path) -> Result<HyperPolygon, AssembleError> {
    let dto: PolygonDto = parse_json(&read_file(path)?, path)?;
    check_schema(&dto.schema, &path.display().to_string())?;
    let mut cusps = Vec::new();
    for c in &dto.cusps {
        cusps.push(CuspCorner {
            base: parse_boundary(&c.base, path)?,
            x: parse_boundary(&c.x, path)?,
            y: parse_boundary(&c.y, path)?,
        });
    }
    let mut gamma_edges = Vec::new();
    for [a, b] in &dto.gamma_edges {
        gamma_edges.push((parse_boundary(a, path)?, parse_boundary(b, path)?));
    }
    let polygon = HyperPolygon {
        cusps,
        interior_angles: dto.interior_angles,
        n_sides: dto.n_sides,
        gamma_edges,
    };
    polygon.validate()?;
    Ok(polygon)
}
