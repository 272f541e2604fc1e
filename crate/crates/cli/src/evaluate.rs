use looplab_core::circle::{commutator_decomposition_check, rotation_number, solve_alpha};
use looplab_core::cocycle::{check_cocycle, gauge_transform, rho_defect, RestrictionEvaluator};
use looplab_core::ising::{ising_restriction, log_z, Engine, InverseTemperature};
use looplab_core::lattice::{AnnularDomain, DyadicRefinement, PointSymmetry, Symmetry};
use looplab_core::loopsoup::{box_dimension, log_tree_count, sample_lerw_loops, soup_mass_m, ust_restriction};
use looplab_core::loopsoup::{LerwOptions, SleParameter};
use looplab_core::{DiscreteDomain, Error, NestedConfig};

use crate::items::Input;
use crate::oracle::list_wired_spanning_trees;
use crate::spec::{ExperimentSpec, SpecParseError, Task};

/// One computed quantity of one item.
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub quantity: String,
    pub value: f64,
    pub error_bound: Option<f64>,
    /// Set for quantities checked against a bound.
    pub pass: Option<bool>,
    /// Engine or method that produced the value.
    pub engine: String,
}

impl Measurement {
    fn new(quantity: impl Into<String>, value: f64, engine: impl Into<String>) -> Self {
        Measurement {
            quantity: quantity.into(),
            value,
            error_bound: None,
            pass: None,
            engine: engine.into(),
        }
    }

    fn bounded(mut self, bound: f64) -> Self {
        self.error_bound = Some(bound);
        self
    }

    /// Marks the value as a gap that must be at most `tol` in size.
    fn within(mut self, tol: f64) -> Self {
        self.pass = Some(self.value.abs() <= tol);
        self
    }
}

/// A task with its evaluator built once per sweep.
#[derive(Clone)]
pub struct Prepared {
    pub task: Task,
    pub tolerance: f64,
    pub seed: u64,
    evaluator: Option<RestrictionEvaluator>,
    beta: Option<InverseTemperature>,
}

impl Prepared {
    pub fn new(spec: &ExperimentSpec) -> Result<Self, SpecParseError> {
        let evaluator = match &spec.task {
            Task::Restriction { evaluator }
            | Task::Cocycle { evaluator }
            | Task::GaugeRoundtrip { evaluator, .. }
            | Task::RhoSymmetry { evaluator }
            | Task::RhoDyadic { evaluator, .. } => Some(evaluator.build()?),
            _ => None,
        };
        let beta = match &spec.task {
            Task::EngineOracle { beta, .. } | Task::IsingVsSoup { beta, .. } => Some(beta.resolve()?),
            _ => None,
        };
        Ok(Prepared {
            task: spec.task.clone(),
            tolerance: spec.tolerance,
            seed: spec.seed,
            evaluator,
            beta,
        })
    }

    pub fn evaluate(&self, input: &Input) -> Result<Vec<Measurement>, Error> {
        let tol = self.tolerance;
        const FITS: &str = "spec validation matches sources to tasks";
        let config = || input.config().expect(FITS);
        let triple = || match input {
            Input::Triple(t) => t,
            _ => panic!("{FITS}"),
        };
        let map = || match input {
            Input::Map(m) => m.build(),
            _ => panic!("{FITS}"),
        };
        Ok(match &self.task {
            Task::Restriction { .. } => {
                let f = self.evaluator();
                vec![Measurement::new("f", f.eval(&config())?, f.name())]
            }
            Task::SoupMass => vec![Measurement::new("soup_mass_m", soup_mass_m(&config())?, "loop-soup")],
            Task::UstSoupIdentity => {
                let c = config();
                let (ust, m) = (ust_restriction(&c)?, soup_mass_m(&c)?);
                vec![
                    Measurement::new("ust_restriction", ust, "matrix-tree"),
                    Measurement::new("soup_mass_m", m, "loop-soup"),
                    Measurement::new("identity_gap", ust + m, "matrix-tree").within(tol),
                ]
            }
            Task::EngineOracle { ratio_tolerance, .. } => engine_oracle(&config(), self.beta(), tol, *ratio_tolerance)?,
            Task::TreeCount => {
                let d = input.domain().expect(FITS);
                let log_count = log_tree_count(d.sites())?;
                let listed = list_wired_spanning_trees(d.sites());
                let mut m = Measurement::new("listed_tree_count", listed as f64, "listing");
                m.pass = Some(log_count.exp().round() as u64 == listed);
                vec![Measurement::new("log_tree_count", log_count, "matrix-tree"), m]
            }
            Task::Cocycle { .. } => {
                let t = triple();
                let f = self.evaluator();
                let r = check_cocycle(f, t, tol, "")?;
                vec![Measurement::new("cocycle_defect", r.defect, f.name()).bounded(tol).within(tol)]
            }
            Task::GaugeRoundtrip { gauge, .. } => {
                let t = triple();
                let f = self.evaluator();
                let g = gauge.build();
                let back = gauge_transform(&gauge_transform(f, g.clone()), g.negate());
                let mut roundtrip = 0.0f64;
                for (i, j) in [(0, 1), (1, 2), (0, 2)] {
                    let c = t.config(i, j);
                    roundtrip = roundtrip.max((back.eval(&c)? - f.eval(&c)?).abs());
                }
                let d0 = check_cocycle(f, t, tol, "")?.defect;
                let d1 = check_cocycle(&gauge_transform(f, g), t, tol, "")?.defect;
                vec![
                    Measurement::new("roundtrip_gap", roundtrip, f.name()).within(tol),
                    Measurement::new("defect_shift", d1 - d0, f.name()).within(tol),
                ]
            }
            Task::RhoSymmetry { .. } => {
                let c = config();
                let f = self.evaluator();
                let annulus = AnnularDomain::detect(c.inner().clone())?;
                let ambient = symmetric_hull(c.outer());
                let mut worst = 0.0f64;
                for p in PointSymmetry::ALL {
                    let d = rho_defect(f, &Symmetry::point(p), &annulus, c.dual_loop(), &ambient)?;
                    worst = worst.max(d.abs());
                }
                vec![Measurement::new("rho_symmetry_max", worst, f.name()).within(tol)]
            }
            Task::RhoDyadic { levels, .. } => {
                let c = config();
                let f = self.evaluator();
                let mut out = Vec::new();
                for &l in levels {
                    let r = c.refine(l);
                    let annulus = AnnularDomain::detect(r.inner().clone())?;
                    let d = rho_defect(f, &DyadicRefinement, &annulus, r.dual_loop(), r.outer())?;
                    out.push(Measurement::new(format!("rho_dyadic@{l}"), d, f.name()));
                }
                let non_increasing = out.windows(2).all(|w| w[1].value.abs() <= w[0].value.abs());
                let mut flag = Measurement::new("rho_non_increasing", f64::from(u8::from(non_increasing)), f.name());
                flag.pass = Some(non_increasing);
                out.push(flag);
                out
            }
            Task::IsingVsSoup { engine, levels, .. } => {
                let c = config();
                let mut out = Vec::new();
                for &l in levels {
                    let r = c.refine(l);
                    out.push(Measurement::new(
                        format!("ising_restriction@{l}"),
                        ising_restriction(&r, self.beta(), *engine)?,
                        engine.name(),
                    ));
                    out.push(Measurement::new(format!("soup_mass_m@{l}"), soup_mass_m(&r)?, "loop-soup"));
                }
                out
            }
            Task::RotationNumber { eps } => {
                let r = rotation_number(&map()?, *eps)?;
                let mut out = vec![Measurement::new("rotation_number", r.value, "iteration").bounded(r.error_bound)];
                if let Some((p, q)) = r.certificate {
                    out.push(Measurement::new("certificate_q", q as f64, format!("fixed point of f^{q} - {p}")));
                }
                out
            }
            Task::SolveAlpha { theta, eps } => {
                let s = solve_alpha(&map()?, *theta, *eps)?;
                vec![
                    Measurement::new("alpha", s.alpha, "bisection").bounded(*eps),
                    Measurement::new("rotation_number", s.rotation.value, "iteration").bounded(s.rotation.error_bound),
                ]
            }
            Task::CommutatorCheck { theta, beta, eps } => {
                let r = commutator_decomposition_check(&map()?, *theta, *beta, *eps)?;
                vec![
                    Measurement::new("sup_defect", r.sup_defect, "grid-256").within(tol),
                    Measurement::new("alpha_error", r.alpha_error, "bisection").bounded(*eps),
                ]
            }
            Task::LerwDimension {
                side,
                loops,
                min_extent,
                scales,
            } => {
                let domain = looplab_core::VertexSet::rectangle(0, 0, side - 1, side - 1);
                let options = LerwOptions {
                    min_extent: *min_extent,
                    ..LerwOptions::default()
                };
                let cycles = sample_lerw_loops(&domain, *loops, self.seed, options)?;
                let est = box_dimension(&cycles, scales)?;
                let expected = SleParameter::new(2.0)?.dimension();
                let mut out: Vec<Measurement> = est
                    .slopes
                    .iter()
                    .enumerate()
                    .map(|(i, s)| Measurement::new(format!("box_slope[{i}]"), *s, "box-counting"))
                    .collect();
                let mut dim = Measurement::new("dimension", est.dimension, "box-counting").bounded(est.stderr);
                dim.pass = Some((est.dimension - expected).abs() <= tol);
                out.push(dim);
                out
            }
        })
    }

    fn evaluator(&self) -> &RestrictionEvaluator {
        self.evaluator.as_ref().expect("prepared for this task")
    }

    fn beta(&self) -> InverseTemperature {
        self.beta.expect("prepared for this task")
    }
}

fn engine_oracle(c: &NestedConfig, beta: InverseTemperature, tol: f64, ratio_tol: f64) -> Result<Vec<Measurement>, Error> {
    let sites = c.outer().sites();
    let e = log_z(sites, beta, Engine::Enumeration)?;
    let t = log_z(sites, beta, Engine::Transfer)?;
    let rel = if e == 0.0 { (t - e).abs() } else { ((t - e) / e).abs() };
    let re = ising_restriction(c, beta, Engine::Enumeration)?;
    let rk = ising_restriction(c, beta, Engine::KacWard)?;
    Ok(vec![
        Measurement::new("transfer_vs_enum", rel, "transfer").within(tol),
        Measurement::new("kacward_vs_enum_ratio", rk - re, "kacward").within(ratio_tol),
    ])
}

/// A centred square containing `d` and all eight of its point-symmetry
/// images.
fn symmetric_hull(d: &DiscreteDomain) -> DiscreteDomain {
    let (x0, y0, x1, y1) = d.sites().bbox().expect("domains are non-empty");
    let half = [x0, y0, x1, y1].iter().map(|v| v.abs()).max().unwrap_or(0) + 2;
    DiscreteDomain::centered_square(half, d.mesh_exponent())
}
