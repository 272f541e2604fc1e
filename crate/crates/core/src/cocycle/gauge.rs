use std::sync::Arc;

use super::RestrictionEvaluator;
use crate::lattice::{DiscreteDomain, DualLoop};

type GaugeFn = dyn Fn(&DualLoop, &DiscreteDomain) -> f64 + Send + Sync;

/// The anchor configuration where every gauge function vanishes: the loop
/// around the centred half-size block inside the centred square of physical
/// side one, at mesh `1/8`.
pub fn reference_config() -> (DualLoop, DiscreteDomain) {
    (
        DualLoop::rectangle(-2, -2, 1, 1),
        DiscreteDomain::rectangle(-4, -4, 3, 3, 3),
    )
}

/// A function `g(ℓ, Σ)`, shifted so that it is zero on [`reference_config`].
#[derive(Clone)]
pub struct GaugeFunction {
    name: String,
    raw: Arc<GaugeFn>,
    offset: f64,
}

impl std::fmt::Debug for GaugeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GaugeFunction")
            .field("name", &self.name)
            .field("offset", &self.offset)
            .finish()
    }
}

impl GaugeFunction {
    pub fn new(
        name: impl Into<String>,
        g: impl Fn(&DualLoop, &DiscreteDomain) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let (lp, dom) = reference_config();
        let offset = g(&lp, &dom);
        GaugeFunction {
            name: name.into(),
            raw: Arc::new(g),
            offset,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, lp: &DualLoop, domain: &DiscreteDomain) -> f64 {
        (self.raw)(lp, domain) - self.offset
    }

    pub fn zero() -> Self {
        GaugeFunction::new("0", |_, _| 0.0)
    }

    /// Physical length of the loop.
    pub fn loop_length() -> Self {
        GaugeFunction::new("length", |lp, d| lp.perimeter() as f64 * mesh(d))
    }

    /// Physical area enclosed by the loop.
    pub fn enclosed_area() -> Self {
        GaugeFunction::new("area", |lp, d| lp.enclosed_cells() as f64 * mesh(d).powi(2))
    }

    /// Physical area of the domain.
    pub fn domain_area() -> Self {
        GaugeFunction::new("domain_area", |_, d| d.len() as f64 * mesh(d).powi(2))
    }

    pub fn negate(&self) -> Self {
        self.scaled(-1.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let g = self.clone();
        GaugeFunction::new(format!("{c}*{}", self.name), move |l, d| c * g.eval(l, d))
    }

    pub fn plus(&self, other: &GaugeFunction) -> Self {
        let (g, h) = (self.clone(), other.clone());
        GaugeFunction::new(format!("{}+{}", self.name, other.name), move |l, d| {
            g.eval(l, d) + h.eval(l, d)
        })
    }
}

fn mesh(d: &DiscreteDomain) -> f64 {
    0.5f64.powi(d.mesh_exponent() as i32)
}

/// `f'(ℓ, Ω', Ω) = f(ℓ, Ω', Ω) + g(ℓ, Ω) - g(ℓ, Ω')`.
pub fn gauge_transform(f: &RestrictionEvaluator, g: GaugeFunction) -> RestrictionEvaluator {
    RestrictionEvaluator::Gauged {
        base: Box::new(f.clone()),
        gauge: g,
    }
}
