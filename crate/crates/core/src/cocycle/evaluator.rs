use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{CocycleError, GaugeFunction};
use crate::ising::{log_z, Engine, InverseTemperature};
use crate::lattice::{NestedConfig, VertexSet};
use crate::loopsoup::{soup_mass_m, ust_restriction};

/// A candidate restriction function `f(ℓ, Ω', Ω)`.
#[derive(Clone)]
pub enum RestrictionEvaluator {
    Ising(Arc<IsingEvaluator>),
    Ust,
    /// `c · M`.
    Soup { c: f64 },
    /// `f(ℓ,Ω',Ω) + g(ℓ,Ω) - g(ℓ,Ω')`.
    Gauged {
        base: Box<RestrictionEvaluator>,
        gauge: GaugeFunction,
    },
    Zero,
}

impl std::fmt::Debug for RestrictionEvaluator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.name())
    }
}

impl RestrictionEvaluator {
    pub fn ising(beta: InverseTemperature, engine: Engine) -> Self {
        RestrictionEvaluator::Ising(Arc::new(IsingEvaluator::new(beta, engine)))
    }

    pub fn name(&self) -> String {
        match self {
            RestrictionEvaluator::Ising(e) => format!("ising[{},beta={}]", e.engine.name(), e.beta.value()),
            RestrictionEvaluator::Ust => "ust".into(),
            RestrictionEvaluator::Soup { c } => format!("soup[c={c}]"),
            RestrictionEvaluator::Gauged { base, gauge } => format!("{}+d({})", base.name(), gauge.name()),
            RestrictionEvaluator::Zero => "zero".into(),
        }
    }

    pub fn eval(&self, cfg: &NestedConfig) -> Result<f64, CocycleError> {
        Ok(match self {
            RestrictionEvaluator::Ising(e) => e.eval(cfg)?,
            RestrictionEvaluator::Ust => ust_restriction(cfg)?,
            RestrictionEvaluator::Soup { c } => c * soup_mass_m(cfg)?,
            RestrictionEvaluator::Gauged { base, gauge } => {
                base.eval(cfg)? + gauge.eval(cfg.dual_loop(), cfg.outer())
                    - gauge.eval(cfg.dual_loop(), cfg.inner())
            }
            RestrictionEvaluator::Zero => 0.0,
        })
    }
}

/// Ising restriction with a cache of `log Z` per site set; cocycle checks
/// reuse each domain several times.
pub struct IsingEvaluator {
    beta: InverseTemperature,
    engine: Engine,
    cache: Mutex<HashMap<VertexSet, f64>>,
}

impl IsingEvaluator {
    pub fn new(beta: InverseTemperature, engine: Engine) -> Self {
        IsingEvaluator {
            beta,
            engine,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn beta(&self) -> InverseTemperature {
        self.beta
    }

    fn log_z(&self, sites: &VertexSet) -> Result<f64, CocycleError> {
        if let Some(&v) = self.cache.lock().expect("cache lock").get(sites) {
            return Ok(v);
        }
        let v = log_z(sites, self.beta, self.engine)?;
        self.cache.lock().expect("cache lock").insert(sites.clone(), v);
        Ok(v)
    }

    pub fn eval(&self, cfg: &NestedConfig) -> Result<f64, CocycleError> {
        if cfg.is_trivial() {
            return Ok(0.0);
        }
        let (ic, oc) = (cfg.inner_cut(), cfg.outer_cut());
        let inner_cut = self.log_z(&ic.inside)? + self.log_z(&ic.outside)?;
        let outer_cut = self.log_z(&oc.inside)? + self.log_z(&oc.outside)?;
        let inner = self.log_z(cfg.inner().sites())?;
        let outer = self.log_z(cfg.outer().sites())?;
        Ok((inner_cut - inner) - (outer_cut - outer))
    }
}
