//! Scenario files: JSON documents naming one or more checks and their data.

use isoperim::fiala::Direction;
use isoperim::green::{Atom, PointMassMeasure};
use isoperim::{Complex64, FourierCoeffs, RadialFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Newest scenario schema major version understood by this build.
pub const SCHEMA_VERSION: u32 = 1;

pub const DEFAULT_NR: usize = 128;
pub const DEFAULT_NTHETA: usize = 256;
pub const DEFAULT_NLEVELS: usize = 64;
pub const MIN_NR: usize = 32;
pub const MIN_NTHETA: usize = 64;
pub const MIN_NLEVELS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Nehari,
    Bol,
    HuberPoint,
    HuberMeasure,
    HuberSuperlevel,
    Alexandrov,
    GreenBound,
    Fiala,
    GaussBonnet,
    ConformalResidual,
}

impl CheckKind {
    pub const ALL: [CheckKind; 10] = [
        CheckKind::Nehari,
        CheckKind::Bol,
        CheckKind::HuberPoint,
        CheckKind::HuberMeasure,
        CheckKind::HuberSuperlevel,
        CheckKind::Alexandrov,
        CheckKind::GreenBound,
        CheckKind::Fiala,
        CheckKind::GaussBonnet,
        CheckKind::ConformalResidual,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Nehari => "nehari",
            CheckKind::Bol => "bol",
            CheckKind::HuberPoint => "huber_point",
            CheckKind::HuberMeasure => "huber_measure",
            CheckKind::HuberSuperlevel => "huber_superlevel",
            CheckKind::Alexandrov => "alexandrov",
            CheckKind::GreenBound => "green_bound",
            CheckKind::Fiala => "fiala",
            CheckKind::GaussBonnet => "gauss_bonnet",
            CheckKind::ConformalResidual => "conformal_residual",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckList {
    One(CheckKind),
    Many(Vec<CheckKind>),
}

impl CheckList {
    pub fn kinds(&self) -> Vec<CheckKind> {
        match self {
            CheckList::One(k) => vec![*k],
            CheckList::Many(ks) => ks.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetName {
    Bubble,
    Flat,
    Sphere,
    Hyperbolic,
}

/// Boundary data `u|_{∂B₁}` or a radial metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoundarySpec", into = "BoundarySpec")]
pub enum Boundary {
    /// `(n, re c_n, im c_n)` triples; real data needs both `±n`.
    Fourier { coeffs: Vec<(i64, f64, f64)> },
    Preset {
        name: PresetName,
        beta: Option<f64>,
        scale: Option<f64>,
    },
    /// Real trigonometric polynomial of degree `n_max` drawn from the run
    /// seed, with `Σ |a_k| + |b_k| = amplitude`.
    Random { n_max: usize, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryType {
    Fourier,
    Preset,
    Random,
}

/// Wire form of [`Boundary`]; a flat struct keeps field paths in errors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    #[serde(rename = "type")]
    pub kind: Option<BoundaryType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<(i64, f64, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<PresetName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
}

impl TryFrom<BoundarySpec> for Boundary {
    type Error = String;

    fn try_from(b: BoundarySpec) -> Result<Self, String> {
        let kind = b.kind.ok_or("missing field `type`")?;
        let allowed: &[&str] = match kind {
            BoundaryType::Fourier => &["coeffs"],
            BoundaryType::Preset => &["name", "beta", "scale"],
            BoundaryType::Random => &["n_max", "amplitude"],
        };
        let present = [
            ("coeffs", b.coeffs.is_some()),
            ("name", b.name.is_some()),
            ("beta", b.beta.is_some()),
            ("scale", b.scale.is_some()),
            ("n_max", b.n_max.is_some()),
            ("amplitude", b.amplitude.is_some()),
        ];
        if let Some((field, _)) = present.iter().find(|(f, p)| *p && !allowed.contains(f)) {
            return Err(format!("field `{field}` does not apply to boundary type `{kind:?}`").to_lowercase());
        }
        Ok(match kind {
            BoundaryType::Fourier => Boundary::Fourier {
                coeffs: b.coeffs.ok_or("missing field `coeffs`")?,
            },
            BoundaryType::Preset => Boundary::Preset {
                name: b.name.ok_or("missing field `name`")?,
                beta: b.beta,
                scale: b.scale,
            },
            BoundaryType::Random => Boundary::Random {
                n_max: b.n_max.ok_or("missing field `n_max`")?,
                amplitude: b.amplitude.unwrap_or(1.0),
            },
        })
    }
}

impl From<Boundary> for BoundarySpec {
    fn from(b: Boundary) -> Self {
        match b {
            Boundary::Fourier { coeffs } => BoundarySpec {
                kind: Some(BoundaryType::Fourier),
                coeffs: Some(coeffs),
                ..BoundarySpec::default()
            },
            Boundary::Preset { name, beta, scale } => BoundarySpec {
                kind: Some(BoundaryType::Preset),
                name: Some(name),
                beta,
                scale,
                ..BoundarySpec::default()
            },
            Boundary::Random { n_max, amplitude } => BoundarySpec {
                kind: Some(BoundaryType::Random),
                n_max: Some(n_max),
                amplitude: Some(amplitude),
                ..BoundarySpec::default()
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    #[default]
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub mass: f64,
    pub at: [f64; 2],
    #[serde(default)]
    pub sign: Sign,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub alpha0: f64,
}

impl MeasureSpec {
    pub fn to_measure(&self) -> PointMassMeasure {
        let mut m = PointMassMeasure {
            alpha0: self.alpha0,
            ..PointMassMeasure::default()
        };
        for a in &self.atoms {
            let atom = Atom::new(a.mass, Complex64::new(a.at[0], a.at[1]));
            match a.sign {
                Sign::Positive => m.positive.push(atom),
                Sign::Negative => m.negative.push(atom),
            }
        }
        m
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nr: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ntheta: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nlevels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub spec: u32,
    pub check: CheckList,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, rename = "K0", skip_serializing_if = "Option::is_none")]
    pub k0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_end: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    /// Superlevel `μ` of the bubble for `huber_superlevel`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    /// Explicit sub-disk radius for `huber_superlevel`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Scenario {
    pub fn new(check: CheckKind) -> Self {
        Scenario {
            spec: SCHEMA_VERSION,
            check: CheckList::One(check),
            boundary: None,
            lambda: None,
            k0: None,
            measure: None,
            alpha: None,
            pole: None,
            r0: None,
            p_end: None,
            step: None,
            direction: None,
            level: None,
            radius: None,
            m_max: None,
            grid: None,
            tolerance: None,
        }
    }

    /// Parses and validates a scenario; every failure is a schema error
    /// carrying the offending field path.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let sc: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Schema(format!("{path}: {}", e.into_inner()))
        })?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let schema = |msg: String| Err(CliError::Schema(msg));
        if self.spec > SCHEMA_VERSION || self.spec == 0 {
            return schema(format!("spec: unsupported schema version {}, this build reads {SCHEMA_VERSION}", self.spec));
        }
        if self.check.kinds().is_empty() {
            return schema("check: at least one check is required".into());
        }
        if let Some(g) = &self.grid {
            for (field, value, min) in [
                ("nr", g.nr, MIN_NR),
                ("ntheta", g.ntheta, MIN_NTHETA),
                ("nlevels", g.nlevels, MIN_NLEVELS),
            ] {
                if let Some(v) = value {
                    if v < min {
                        return schema(format!("grid.{field}: {v} is below the minimum {min}"));
                    }
                }
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return schema(format!("tolerance: must be positive, got {t}"));
            }
        }
        if let Some(Boundary::Random { n_max, amplitude }) = &self.boundary {
            if *n_max == 0 || !(amplitude.is_finite() && *amplitude >= 0.0) {
                return schema("boundary: random data needs n_max ≥ 1 and a finite amplitude ≥ 0".into());
            }
        }
        for kind in self.check.kinds() {
            for field in required_fields(kind) {
                if !self.has(field) {
                    return schema(format!("{field}: required for check `{}`", kind.name()));
                }
            }
            if needs_preset(kind) && !matches!(self.boundary, Some(Boundary::Preset { .. })) {
                return schema(format!("boundary: check `{}` needs a preset radial metric", kind.name()));
            }
        }
        let superlevel = self.check.kinds().contains(&CheckKind::HuberSuperlevel);
        if superlevel && self.level.is_none() && self.radius.is_none() {
            return schema("level: `huber_superlevel` needs `level` or `radius`".into());
        }
        Ok(())
    }

    fn has(&self, field: &str) -> bool {
        match field {
            "boundary" => self.boundary.is_some(),
            "lambda" => self.lambda.is_some(),
            "K0" => self.k0.is_some(),
            "measure" => self.measure.is_some(),
            "alpha" => self.alpha.is_some(),
            "pole" => self.pole.is_some(),
            "r0" => self.r0.is_some(),
            _ => true,
        }
    }

    pub fn pole_point(&self) -> Option<Complex64> {
        self.pole.map(|[x, y]| Complex64::new(x, y))
    }

    /// Radial family of a preset boundary.
    pub fn family(&self) -> Option<RadialFamily> {
        match self.boundary {
            Some(Boundary::Preset { name, beta, scale }) => Some(match name {
                PresetName::Bubble => RadialFamily::Bubble { beta: beta.unwrap_or(1.0) },
                PresetName::Flat => RadialFamily::Flat,
                PresetName::Sphere => RadialFamily::sphere(),
                PresetName::Hyperbolic => RadialFamily::Hyperbolic { scale: scale.unwrap_or(1.0) },
            }),
            _ => None,
        }
    }

    /// Boundary values `u(e^{iθ})` as a Fourier series; zero when absent.
    pub fn boundary_coeffs(&self, seed: u64) -> FourierCoeffs {
        match &self.boundary {
            None => FourierCoeffs::zeros(0),
            Some(Boundary::Fourier { coeffs }) => {
                let modes: Vec<(i64, Complex64)> =
                    coeffs.iter().map(|&(n, re, im)| (n, Complex64::new(re, im))).collect();
                FourierCoeffs::from_modes(&modes)
            }
            Some(Boundary::Preset { .. }) => FourierCoeffs::constant(self.family().map_or(0.0, |f| f.value(1.0))),
            Some(Boundary::Random { n_max, amplitude }) => random_boundary(seed, *n_max, *amplitude),
        }
    }
}

fn required_fields(kind: CheckKind) -> &'static [&'static str] {
    match kind {
        CheckKind::Nehari | CheckKind::ConformalResidual => &["boundary"],
        CheckKind::Bol => &["boundary", "lambda"],
        CheckKind::HuberPoint => &["alpha", "pole"],
        CheckKind::HuberMeasure => &["measure"],
        CheckKind::HuberSuperlevel => &["boundary"],
        CheckKind::Alexandrov => &["boundary", "K0"],
        CheckKind::GreenBound => &["pole"],
        CheckKind::Fiala | CheckKind::GaussBonnet => &["boundary", "r0"],
    }
}

fn needs_preset(kind: CheckKind) -> bool {
    matches!(
        kind,
        CheckKind::HuberSuperlevel | CheckKind::Alexandrov | CheckKind::Fiala | CheckKind::GaussBonnet
    )
}

/// Random real trigonometric polynomial `Σ a_k cos kθ + b_k sin kθ` with
/// `Σ |a_k| + |b_k| = amplitude`, so `|u| ≤ amplitude`.
pub fn random_boundary(seed: u64, n_max: usize, amplitude: f64) -> FourierCoeffs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..n_max).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..n_max).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let total: f64 = a.iter().chain(&b).map(|x| x.abs()).sum();
    let s = if total > 0.0 { amplitude / total } else { 0.0 };
    let a: Vec<f64> = a.iter().map(|x| x * s).collect();
    let b: Vec<f64> = b.iter().map(|x| x * s).collect();
    FourierCoeffs::from_real_trig(0.0, &a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema_err(text: &str) -> String {
        match Scenario::parse(text) {
            Err(CliError::Schema(msg)) => msg,
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn parses_minimal_scenarios() {
        let sc = Scenario::parse(
            r#"{"spec": 1, "check": "nehari", "boundary": {"type": "fourier", "coeffs": [[1, 0.5, 0], [-1, 0.5, 0]]}}"#,
        )
        .unwrap();
        assert_eq!(sc.check.kinds(), vec![CheckKind::Nehari]);
        assert_eq!(sc.boundary_coeffs(0), FourierCoeffs::from_real_trig(0.0, &[1.0], &[]));
        let sc = Scenario::parse(
            r#"{"spec": 1, "check": ["bol", "alexandrov"], "boundary": {"type": "preset", "name": "bubble", "beta": 2},
                "lambda": 2, "K0": 1, "grid": {"nr": 32}}"#,
        )
        .unwrap();
        assert_eq!(sc.family(), Some(RadialFamily::Bubble { beta: 2.0 }));
    }

    #[test]
    fn schema_errors_name_the_field() {
        assert!(schema_err(r#"{"spec": 1, "check": "nehari", "boundary": {"type": "fourier", "coeffs": [[1, "a", 0]]}}"#)
            .starts_with("boundary.coeffs[0]"));
        assert!(schema_err(r#"{"spec": 1, "check": "nehari", "colour": 3}"#).contains("colour"));
        assert!(schema_err(r#"{"spec": 2, "check": "nehari"}"#).starts_with("spec"));
        assert!(schema_err(r#"{"spec": 1, "check": "bol", "boundary": {"type": "preset", "name": "flat"}}"#)
            .starts_with("lambda"));
        assert!(schema_err(r#"{"spec": 1, "check": "nehari", "boundary": {"type": "preset", "name": "flat"}, "grid": {"nr": 8}}"#)
            .starts_with("grid.nr"));
        assert!(schema_err(r#"{"spec": 1, "check": "fiala", "boundary": {"type": "fourier", "coeffs": []}, "r0": 1}"#)
            .starts_with("boundary"));
        assert!(schema_err(r#"{"spec": 1, "check": "nehari", "boundary": {"type": "preset", "name": "flat", "extra": 1}}"#)
            .starts_with("boundary"));
        assert!(schema_err(r#"{"spec": 1, "check": "nehari", "boundary": {"type": "preset", "name": "flat", "coeffs": []}}"#)
            .contains("coeffs"));
    }

    #[test]
    fn scenarios_round_trip() {
        let text = r#"{"spec": 1, "check": ["fiala"], "boundary": {"type": "preset", "name": "hyperbolic", "scale": 0.5},
                       "r0": 0.5, "direction": "inward", "measure": {"atoms": [{"mass": 1, "at": [0, 0]}]}}"#;
        let sc = Scenario::parse(text).unwrap();
        let back = Scenario::parse(&serde_json::to_string(&sc).unwrap()).unwrap();
        assert_eq!(back, sc);
    }

    #[test]
    fn random_boundaries_are_seeded() {
        let a = random_boundary(3, 8, 1.0);
        assert_eq!(a, random_boundary(3, 8, 1.0));
        assert_ne!(a, random_boundary(4, 8, 1.0));
        assert!(a.is_hermitian(0.0));
        let sup = a.real_samples(512).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert!(sup <= 1.0 + 1e-12);
    }
}
