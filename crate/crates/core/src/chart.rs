//! Chart domains, the metric catalog, and custom chart documents.
//!
//! Every metric is presented through one distinguished coordinate chart whose
//! box covers the manifold up to a measure-zero set. Coefficient functions
//! evaluate over any [`ChartScalar`], which is what lets the jet extraction
//! run them on dual numbers.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::scalar::{ChartScalar, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

/// How quadrature nodes are laid out along one coordinate axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisRule {
    /// Composite Gauss-Legendre panels on an open interval whose endpoints
    /// may be coordinate degeneracies (poles, collapsed fibers).
    GaussLegendre,
    /// Uniform nodes with equal weights on a periodic direction.
    PeriodicUniform,
}

#[derive(Clone, Debug)]
pub struct ChartDomain {
    /// Closed coordinate box; the metric is only guaranteed positive definite
    /// in the interior.
    pub bounds: [[f64; 2]; 4],
    pub axes: [AxisRule; 4],
    pub metric: MetricField,
}

/// Coefficient field of a chart. Catalog entries are native; custom entries
/// carry parsed expressions.
#[derive(Clone, Debug)]
pub enum MetricField {
    /// Flat product of four circles; the chart box is `[0, p_i)` and the
    /// coefficients are the identity regardless of the periods.
    FlatTorus,
    /// Round 4-sphere in hyperspherical angles `(a1, a2, a3, phi)`.
    RoundSphere { radius: f64 },
    /// `S^3 x S^1` in Hopf angles `(eta, xi1, xi2, tau)`.
    ProductS3S1 { radius: f64 },
    /// Fubini-Study on `CP^2`, Euler angles `(chi, theta, psi, phi)`,
    /// normalized so the scalar curvature is 24 (sectional range [1, 4]).
    FubiniStudy,
    /// Product of two round 2-spheres `(theta1, phi1, theta2, phi2)`.
    ProductS2S2 { r1: f64, r2: f64 },
    /// 4x4 symmetric matrix of expressions over `x0..x3`.
    Custom { coeffs: Box<[[Expr; 4]; 4]> },
}

#[derive(Clone, Debug)]
pub struct ManifoldSpec {
    pub name: String,
    /// +1 or -1; which half of the two-form bundle counts as self-dual.
    pub orientation: i8,
    pub charts: Vec<ChartDomain>,
}

impl MetricField {
    pub fn eval<S: ChartScalar>(&self, x: &[S; 4]) -> [[S; 4]; 4] {
        let zero = S::lit(0.0);
        let mut g = [[zero; 4]; 4];
        match self {
            MetricField::FlatTorus => {
                for i in 0..4 {
                    g[i][i] = S::lit(1.0);
                }
            }
            MetricField::RoundSphere { radius } => {
                let r2 = S::lit(radius * radius);
                let s1 = x[0].sin();
                let s2 = x[1].sin();
                let s3 = x[2].sin();
                g[0][0] = r2;
                g[1][1] = r2 * s1 * s1;
                g[2][2] = g[1][1] * s2 * s2;
                g[3][3] = g[2][2] * s3 * s3;
            }
            MetricField::ProductS3S1 { radius } => {
                let r2 = S::lit(radius * radius);
                let c = x[0].cos();
                let s = x[0].sin();
                g[0][0] = r2;
                g[1][1] = r2 * c * c;
                g[2][2] = r2 * s * s;
                g[3][3] = S::lit(1.0);
            }
            MetricField::FubiniStudy => {
                let quarter = S::lit(0.25);
                let s = x[0].sin();
                let c = x[0].cos();
                let s2 = s * s;
                let c2 = c * c;
                let st = x[1].sin();
                let ct = x[1].cos();
                g[0][0] = S::lit(1.0);
                g[1][1] = quarter * s2;
                g[2][2] = quarter * s2 * c2;
                g[3][3] = quarter * s2 * (st * st + c2 * ct * ct);
                g[2][3] = quarter * s2 * c2 * ct;
                g[3][2] = g[2][3];
            }
            MetricField::ProductS2S2 { r1, r2 } => {
                let a = S::lit(r1 * r1);
                let b = S::lit(r2 * r2);
                let s1 = x[0].sin();
                let s2 = x[2].sin();
                g[0][0] = a;
                g[1][1] = a * s1 * s1;
                g[2][2] = b;
                g[3][3] = b * s2 * s2;
            }
            MetricField::Custom { coeffs } => {
                for i in 0..4 {
                    for j in 0..4 {
                        g[i][j] = coeffs[i][j].eval(x);
                    }
                }
            }
        }
        g
    }
}

impl ChartDomain {
    pub fn width(&self, axis: usize) -> f64 {
        self.bounds[axis][1] - self.bounds[axis][0]
    }

    pub fn contains(&self, x: &[f64; 4]) -> bool {
        (0..4).all(|k| x[k] >= self.bounds[k][0] && x[k] <= self.bounds[k][1])
    }

    /// Uniform interior samples. Gauss-Legendre axes are shrunk by a relative
    /// margin because their endpoints are coordinate degeneracies; periodic
    /// axes are sampled over the full period.
    pub fn sample_interior(&self, n: usize, margin: f64, seed: u64) -> Vec<[f64; 4]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let mut x = [0.0; 4];
                for k in 0..4 {
                    let [lo, hi] = self.bounds[k];
                    let pad = match self.axes[k] {
                        AxisRule::GaussLegendre => (hi - lo) * margin.min(0.49),
                        AxisRule::PeriodicUniform => 0.0,
                    };
                    x[k] = rng.gen_range(lo + pad..hi - pad);
                }
                x
            })
            .collect()
    }
}

impl ManifoldSpec {
    pub fn chart(&self, idx: usize) -> Result<&ChartDomain> {
        self.charts
            .get(idx)
            .ok_or_else(|| Error::precondition(format!("chart index {idx} out of range")))
    }

    pub fn with_orientation(mut self, orientation: i8) -> Self {
        self.orientation = orientation;
        self
    }
}

const GL: AxisRule = AxisRule::GaussLegendre;
const PER: AxisRule = AxisRule::PeriodicUniform;

pub fn flat_torus(periods: [f64; 4]) -> ManifoldSpec {
    ManifoldSpec {
        name: "flat-torus-4".into(),
        orientation: 1,
        charts: vec![ChartDomain {
            bounds: [
                [0.0, periods[0]],
                [0.0, periods[1]],
                [0.0, periods[2]],
                [0.0, periods[3]],
            ],
            axes: [PER; 4],
            metric: MetricField::FlatTorus,
        }],
    }
}

pub fn round_sphere(radius: f64) -> ManifoldSpec {
    use std::f64::consts::PI;
    ManifoldSpec {
        name: "round-sphere-4".into(),
        orientation: 1,
        charts: vec![ChartDomain {
            bounds: [[0.0, PI], [0.0, PI], [0.0, PI], [0.0, 2.0 * PI]],
            axes: [GL, GL, GL, PER],
            metric: MetricField::RoundSphere { radius },
        }],
    }
}

pub fn product_s3_s1(radius: f64, circle: f64) -> ManifoldSpec {
    use std::f64::consts::PI;
    ManifoldSpec {
        name: "product-S3xS1".into(),
        orientation: 1,
        charts: vec![ChartDomain {
            bounds: [[0.0, PI / 2.0], [0.0, 2.0 * PI], [0.0, 2.0 * PI], [0.0, circle]],
            axes: [GL, PER, PER, PER],
            metric: MetricField::ProductS3S1 { radius },
        }],
    }
}

/// The coordinate order `(chi, theta, psi, phi)` makes orientation +1 the
/// complex orientation: the self-dual Weyl spectrum is `(R/6, -R/12, -R/12)`.
pub fn fubini_study() -> ManifoldSpec {
    use std::f64::consts::PI;
    ManifoldSpec {
        name: "fubini-study-CP2".into(),
        orientation: 1,
        charts: vec![ChartDomain {
            bounds: [[0.0, PI / 2.0], [0.0, PI], [0.0, 4.0 * PI], [0.0, 2.0 * PI]],
            axes: [GL, GL, PER, PER],
            metric: MetricField::FubiniStudy,
        }],
    }
}

pub fn product_s2_s2(r1: f64, r2: f64) -> ManifoldSpec {
    use std::f64::consts::PI;
    ManifoldSpec {
        name: "product-S2xS2".into(),
        orientation: 1,
        charts: vec![ChartDomain {
            bounds: [[0.0, PI], [0.0, 2.0 * PI], [0.0, PI], [0.0, 2.0 * PI]],
            axes: [GL, PER, GL, PER],
            metric: MetricField::ProductS2S2 { r1, r2 },
        }],
    }
}

/// Default-parameter catalog, in reporting order.
pub fn catalog() -> Vec<ManifoldSpec> {
    vec![
        round_sphere(1.0),
        flat_torus([1.0; 4]),
        product_s3_s1(1.0, 2.0 * std::f64::consts::PI),
        fubini_study(),
        product_s2_s2(1.0, 1.0),
    ]
}

/// Resolve a short catalog name as used by the command line.
pub fn by_name(name: &str) -> Option<ManifoldSpec> {
    match name {
        "s4" | "round-sphere-4" => Some(round_sphere(1.0)),
        "t4" | "flat-torus-4" => Some(flat_torus([1.0; 4])),
        "s3xs1" | "product-S3xS1" => Some(product_s3_s1(1.0, 2.0 * std::f64::consts::PI)),
        "cp2-fs" | "fubini-study-CP2" => Some(fubini_study()),
        "s2xs2" | "product-S2xS2" => Some(product_s2_s2(1.0, 1.0)),
        _ => None,
    }
}

// ---- JSON ingestion -------------------------------------------------------

#[derive(Deserialize)]
struct RawSpec {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    catalog: Option<String>,
    #[serde(default)]
    params: Option<RawParams>,
    #[serde(default = "default_orientation")]
    orientation: i8,
    #[serde(default)]
    chart: Option<RawChart>,
}

fn default_orientation() -> i8 {
    1
}

#[derive(Deserialize, Default)]
struct RawParams {
    radius: Option<f64>,
    circle: Option<f64>,
    r1: Option<f64>,
    r2: Option<f64>,
    periods: Option<[f64; 4]>,
}

#[derive(Deserialize)]
struct RawChart {
    bounds: [[f64; 2]; 4],
    periodic: [bool; 4],
    metric: Vec<Vec<String>>,
}

/// Parse a manifold document: either `{"catalog": "...", "params": {...}}`
/// or a custom chart with coefficient expressions.
pub fn spec_from_json(src: &str) -> Result<ManifoldSpec> {
    let raw: RawSpec = serde_json::from_str(src).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        message: format!("manifold document: {e}"),
    })?;

    if let Some(catalog_name) = raw.catalog {
        let p = raw.params.unwrap_or_default();
        let mut spec = match catalog_name.as_str() {
            "round-sphere-4" | "s4" => round_sphere(p.radius.unwrap_or(1.0)),
            "flat-torus-4" | "t4" => flat_torus(p.periods.unwrap_or([1.0; 4])),
            "product-S3xS1" | "s3xs1" => product_s3_s1(
                p.radius.unwrap_or(1.0),
                p.circle.unwrap_or(2.0 * std::f64::consts::PI),
            ),
            "fubini-study-CP2" | "cp2-fs" => fubini_study(),
            "product-S2xS2" | "s2xs2" => product_s2_s2(p.r1.unwrap_or(1.0), p.r2.unwrap_or(1.0)),
            other => {
                return Err(Error::precondition(format!("unknown catalog entry `{other}`")))
            }
        };
        spec.orientation = raw.orientation;
        if raw.orientation != 1 && raw.orientation != -1 {
            return Err(Error::precondition("orientation must be +1 or -1"));
        }
        if let Some(name) = raw.name {
            spec.name = name;
        }
        return Ok(spec);
    }

    let chart = raw
        .chart
        .ok_or_else(|| Error::precondition("document needs either `catalog` or `chart`"))?;
    if raw.orientation != 1 && raw.orientation != -1 {
        return Err(Error::precondition("orientation must be +1 or -1"));
    }
    if chart.metric.len() != 4 || chart.metric.iter().any(|row| row.len() != 4) {
        return Err(Error::precondition("chart.metric must be a 4x4 array of expressions"));
    }
    for k in 0..4 {
        if !(chart.bounds[k][1] > chart.bounds[k][0]) {
            return Err(Error::precondition(format!(
                "chart.bounds[{k}] must be an increasing interval"
            )));
        }
    }

    let mut coeffs: Box<[[Expr; 4]; 4]> = Box::new(std::array::from_fn(|_| {
        std::array::from_fn(|_| Expr::Num(0.0))
    }));
    for i in 0..4 {
        for j in 0..4 {
            coeffs[i][j] = Expr::parse(&chart.metric[i][j]).map_err(|e| match e {
                Error::Parse { line, col, message } => Error::Parse {
                    line,
                    col,
                    message: format!("metric[{i}][{j}]: {message}"),
                },
                other => other,
            })?;
        }
    }

    let axes = std::array::from_fn(|k| if chart.periodic[k] { PER } else { GL });
    Ok(ManifoldSpec {
        name: raw.name.unwrap_or_else(|| "custom-chart".into()),
        orientation: raw.orientation,
        charts: vec![ChartDomain { bounds: chart.bounds, axes, metric: MetricField::Custom { coeffs } }],
    })
}

/// Conformal rescale `u^2 g` of a spec whose coefficients are expressible, by
/// wrapping the coefficient expressions. Only flat tori are supported as the
/// base; the conformal solver handles curved bases through its own transform.
pub fn conformal_torus(periods: [f64; 4], factor: &str) -> Result<ManifoldSpec> {
    let u = Expr::parse(factor)?;
    let u2 = Expr::Mul(Box::new(u.clone()), Box::new(u));
    let mut coeffs: Box<[[Expr; 4]; 4]> = Box::new(std::array::from_fn(|_| {
        std::array::from_fn(|_| Expr::Num(0.0))
    }));
    for (i, row) in coeffs.iter_mut().enumerate() {
        row[i] = u2.clone();
    }
    Ok(ManifoldSpec {
        name: "conformal-torus".into(),
        orientation: 1,
        charts: vec![ChartDomain {
            bounds: [
                [0.0, periods[0]],
                [0.0, periods[1]],
                [0.0, periods[2]],
                [0.0, periods[3]],
            ],
            axes: [PER; 4],
            metric: MetricField::Custom { coeffs },
        }],
    })
}

/// Positive-definiteness probe used by ingestion checks and tests: evaluates
/// the metric at sampled interior points and verifies symmetry and positive
/// leading minors.
pub fn check_positive_definite<T>(spec: &ManifoldSpec, samples: usize, seed: u64) -> Result<()>
where
    T: Real + ChartScalar<Base = T>,
{
    for chart in &spec.charts {
        for x in chart.sample_interior(samples, 0.03, seed) {
            let xs: [T; 4] = std::array::from_fn(|k| T::of(x[k]));
            let g = chart.metric.eval(&xs);
            // Symmetry defect.
            let mut scale = T::zero();
            for row in &g {
                for v in row {
                    scale = scale.max(num_traits::Float::abs(*v));
                }
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    if num_traits::Float::abs(g[i][j] - g[j][i]) > T::of(1e-13) * scale.max(T::one()) {
                        return Err(Error::Degenerate {
                            point: x,
                            detail: format!("metric not symmetric at entry ({i},{j})"),
                        });
                    }
                }
            }
            // Sylvester criterion on leading minors.
            let mut m = g;
            for col in 0..4 {
                if !(m[col][col] > T::zero()) {
                    return Err(Error::Degenerate {
                        point: x,
                        detail: format!("leading minor {} not positive", col + 1),
                    });
                }
                for r in col + 1..4 {
                    let f = m[r][col] / m[col][col];
                    for c in col..4 {
                        let s = m[col][c];
                        m[r][c] = m[r][c] - f * s;
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_charts_positive_definite() {
        for spec in catalog() {
            check_positive_definite::<f64>(&spec, 64, 0xC0FFEE).unwrap();
        }
    }

    #[test]
    fn custom_chart_document_round_trip() {
        let doc = r#"{
            "name": "stretched-torus",
            "orientation": 1,
            "chart": {
                "bounds": [[0,1],[0,1],[0,1],[0,1]],
                "periodic": [true,true,true,true],
                "metric": [
                    ["1 + 0.1*sin(2*pi*x0)", "0", "0", "0"],
                    ["0", "1", "0", "0"],
                    ["0", "0", "1", "0"],
                    ["0", "0", "0", "1"]
                ]
            }
        }"#;
        let spec = spec_from_json(doc).unwrap();
        assert_eq!(spec.name, "stretched-torus");
        let g = spec.charts[0].metric.eval(&[0.25f64, 0.0, 0.0, 0.0]);
        assert!((g[0][0] - 1.1).abs() < 1e-15);
        check_positive_definite::<f64>(&spec, 32, 7).unwrap();
    }

    #[test]
    fn bad_expression_reports_entry_and_position() {
        let doc = r#"{
            "chart": {
                "bounds": [[0,1],[0,1],[0,1],[0,1]],
                "periodic": [true,true,true,true],
                "metric": [
                    ["1", "0", "0", "0"],
                    ["0", "1 + ", "0", "0"],
                    ["0", "0", "1", "0"],
                    ["0", "0", "0", "1"]
                ]
            }
        }"#;
        let err = spec_from_json(doc).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("metric[1][1]"), "got: {msg}");
    }

    #[test]
    fn sphere_scaling_of_bounds_is_fixed() {
        let s = round_sphere(2.0);
        assert_eq!(s.charts[0].width(3), 2.0 * std::f64::consts::PI);
    }
}
