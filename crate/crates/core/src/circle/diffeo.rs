use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;

use super::CircleError;

/// Inverse lifts without a closed form are solved to this accuracy.
pub const INVERSE_TOLERANCE: f64 = 1e-13;

const CERTIFICATE_GRID: usize = 4096;

/// A circle diffeomorphism, represented by its lift.
#[derive(Clone)]
pub struct CircleDiffeo {
    repr: Arc<Repr>,
}

enum Repr {
    /// `x ↦ x + alpha`.
    Rotation(f64),
    /// `z ↦ e^{iθ}(z + c)/(c̄z + 1)`; `theta` also fixes the lift.
    Mobius { theta: f64, c: Complex64 },
    /// `x ↦ x + a0 + Σ a_k cos(2πkx) + b_k sin(2πkx)`, with a certified
    /// lower bound on the derivative.
    Trig {
        a0: f64,
        coeffs: Vec<(f64, f64)>,
        min_slope: f64,
    },
    /// `x ↦ -x`.
    Reflection,
    /// `parts[0] ∘ parts[1] ∘ …`.
    Compose(Vec<CircleDiffeo>),
    /// Inverse of a trigonometric lift, evaluated by a safeguarded solve.
    TrigInverse(CircleDiffeo),
}

impl std::fmt::Debug for CircleDiffeo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &*self.repr {
            Repr::Rotation(a) => write!(f, "R({a})"),
            Repr::Mobius { theta, c } => write!(f, "Mobius({theta}, {c})"),
            Repr::Trig { a0, coeffs, .. } => write!(f, "Trig({a0}, {coeffs:?})"),
            Repr::Reflection => write!(f, "Reflection"),
            Repr::Compose(parts) => f.debug_list().entries(parts).finish(),
            Repr::TrigInverse(g) => write!(f, "Inverse({g:?})"),
        }
    }
}

impl CircleDiffeo {
    fn from_repr(repr: Repr) -> Self {
        CircleDiffeo { repr: Arc::new(repr) }
    }

    pub fn identity() -> Self {
        Self::rotation(0.0)
    }

    /// Rotation by `alpha` turns.
    pub fn rotation(alpha: f64) -> Self {
        Self::from_repr(Repr::Rotation(alpha))
    }

    /// `z ↦ e^{iθ}(z + c)/(c̄z + 1)` with `θ` in radians and `|c| < 1`.
    pub fn mobius(theta: f64, c: Complex64) -> Result<Self, CircleError> {
        if !theta.is_finite() || !c.re.is_finite() || !c.im.is_finite() || c.norm() >= 1.0 {
            return Err(CircleError::InvalidParameter(format!("mobius({theta}, {c}) needs |c| < 1")));
        }
        Ok(Self::from_repr(Repr::Mobius { theta, c }))
    }

    /// Trigonometric lift. The derivative is certified positive either by
    /// the coefficient bound `Σ 2πk|c_k| < 1` or, failing that, on a grid
    /// with the second-derivative bound covering the gaps.
    pub fn trig(a0: f64, coeffs: Vec<(f64, f64)>) -> Result<Self, CircleError> {
        if !a0.is_finite() || coeffs.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(CircleError::InvalidParameter("non-finite coefficient".into()));
        }
        let norm = |p: i32| -> f64 {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, (a, b))| (TAU * (k + 1) as f64).powi(p) * a.hypot(*b))
                .sum()
        };
        let mut min_slope = 1.0 - norm(1);
        if min_slope <= 0.0 {
            let probe = Repr::Trig {
                a0,
                coeffs: coeffs.clone(),
                min_slope: 0.0,
            };
            let grid_min = (0..CERTIFICATE_GRID)
                .map(|i| trig_slope(&probe, i as f64 / CERTIFICATE_GRID as f64))
                .fold(f64::INFINITY, f64::min);
            min_slope = grid_min - norm(2) / (2.0 * CERTIFICATE_GRID as f64);
        }
        if min_slope <= 0.0 {
            return Err(CircleError::NotInvertible(format!(
                "derivative not certified positive (bound {min_slope:.3e})"
            )));
        }
        Ok(Self::from_repr(Repr::Trig { a0, coeffs, min_slope }))
    }

    pub fn reflection() -> Self {
        Self::from_repr(Repr::Reflection)
    }

    /// Möbius parameters `(θ, c)` if this map is Möbius (rotations
    /// included).
    pub fn mobius_params(&self) -> Option<(f64, Complex64)> {
        match &*self.repr {
            Repr::Rotation(a) => Some((TAU * a, Complex64::new(0.0, 0.0))),
            Repr::Mobius { theta, c } => Some((*theta, *c)),
            _ => None,
        }
    }

    pub fn preserves_orientation(&self) -> bool {
        match &*self.repr {
            Repr::Reflection => false,
            Repr::Compose(parts) => parts.iter().filter(|p| !p.preserves_orientation()).count() % 2 == 0,
            Repr::TrigInverse(_) | Repr::Rotation(_) | Repr::Mobius { .. } | Repr::Trig { .. } => true,
        }
    }

    /// The lift `F(x)`.
    pub fn lift(&self, x: f64) -> f64 {
        match &*self.repr {
            Repr::Rotation(a) => x + a,
            Repr::Mobius { theta, c } => {
                // arg(w/z) = -2 arg(1 + c̄z) for |z| = 1, and Re(1 + c̄z) > 0
                let z = Complex64::from_polar(1.0, TAU * x);
                x + theta / TAU - (Complex64::new(1.0, 0.0) + c.conj() * z).arg() / PI
            }
            Repr::Trig { a0, coeffs, .. } => {
                let mut y = x + a0;
                for (k, (a, b)) in coeffs.iter().enumerate() {
                    let (s, c) = (TAU * (k + 1) as f64 * x).sin_cos();
                    y += a * c + b * s;
                }
                y
            }
            Repr::Reflection => -x,
            Repr::Compose(parts) => parts.iter().rev().fold(x, |y, p| p.lift(y)),
            Repr::TrigInverse(g) => trig_inverse(g, x),
        }
    }

    /// The point of the unit circle that `x` is sent to.
    pub fn on_circle(&self, x: f64) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.lift(x))
    }

    /// `self ∘ other`, in closed form when both are Möbius.
    pub fn compose(&self, other: &CircleDiffeo) -> CircleDiffeo {
        match (&*self.repr, &*other.repr) {
            (Repr::Rotation(a), Repr::Rotation(b)) => return CircleDiffeo::rotation(a + b),
            (Repr::Rotation(a), Repr::Trig { a0, coeffs, min_slope }) => {
                return Self::from_repr(Repr::Trig {
                    a0: a0 + a,
                    coeffs: coeffs.clone(),
                    min_slope: *min_slope,
                })
            }
            _ => {}
        }
        if let (Some(f), Some(g)) = (self.mobius_params(), other.mobius_params()) {
            return mobius_compose(self, other, f, g);
        }
        let mut parts = Vec::new();
        for d in [self, other] {
            match &*d.repr {
                Repr::Compose(inner) => parts.extend(inner.iter().cloned()),
                _ => parts.push(d.clone()),
            }
        }
        Self::from_repr(Repr::Compose(parts))
    }

    pub fn invert(&self) -> CircleDiffeo {
        match &*self.repr {
            Repr::Rotation(a) => CircleDiffeo::rotation(-a),
            // inverse matrix of (a, b) is (ā, -b)
            Repr::Mobius { theta, c } => Self::from_repr(Repr::Mobius {
                theta: -theta,
                c: -Complex64::from_polar(1.0, *theta) * c,
            }),
            Repr::Trig { .. } => Self::from_repr(Repr::TrigInverse(self.clone())),
            Repr::Reflection => self.clone(),
            Repr::Compose(parts) => Self::from_repr(Repr::Compose(parts.iter().rev().map(|p| p.invert()).collect())),
            Repr::TrigInverse(g) => g.clone(),
        }
    }

    /// `F^n(x)`. The integer part is carried separately so that every step
    /// is evaluated near `[0, 1)`.
    pub fn iterate(&self, x: f64, n: u64) -> f64 {
        let (mut whole, mut frac) = (x.floor(), x - x.floor());
        let sign = if self.preserves_orientation() { 1.0 } else { -1.0 };
        for _ in 0..n {
            let y = self.lift(frac);
            let k = y.floor();
            whole = sign * whole + k;
            frac = y - k;
        }
        whole + frac
    }
}

fn trig_slope(repr: &Repr, x: f64) -> f64 {
    let Repr::Trig { coeffs, .. } = repr else { unreachable!() };
    let mut d = 1.0;
    for (k, (a, b)) in coeffs.iter().enumerate() {
        let w = TAU * (k + 1) as f64;
        let (s, c) = (w * x).sin_cos();
        d += w * (b * c - a * s);
    }
    d
}

/// Solve `F(x) = y` by Newton steps kept inside a shrinking bracket. Since
/// `F' ≥ min_slope`, a residual `r` puts `x` within `r / min_slope` of the
/// root, which is the stopping test.
fn trig_inverse(g: &CircleDiffeo, y: f64) -> f64 {
    let Repr::Trig { a0, coeffs, min_slope } = &*g.repr else { unreachable!() };
    // F⁻¹(y + k) = F⁻¹(y) + k keeps the solve at unit scale
    let shift = y.floor();
    let y = y - shift;
    let spread: f64 = coeffs.iter().map(|(a, b)| a.abs() + b.abs()).sum();
    let (mut lo, mut hi) = (y - a0 - spread - 1e-12, y - a0 + spread + 1e-12);
    let mut x = y - a0;
    for _ in 0..200 {
        let r = g.lift(x) - y;
        if r.abs() <= INVERSE_TOLERANCE * min_slope * 0.5 {
            return x + shift;
        }
        if r > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let newton = x - r / trig_slope(&g.repr, x);
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= INVERSE_TOLERANCE {
            return 0.5 * (lo + hi) + shift;
        }
    }
    x + shift
}

fn mobius_compose(
    f_map: &CircleDiffeo,
    g_map: &CircleDiffeo,
    (tf, cf): (f64, Complex64),
    (tg, cg): (f64, Complex64),
) -> CircleDiffeo {
    // (a, b) ↔ z ↦ (az + b)/(b̄z + ā), a = e^{iθ/2}, b = e^{iθ/2}c
    let (af, bf) = (Complex64::from_polar(1.0, tf / 2.0), Complex64::from_polar(1.0, tf / 2.0) * cf);
    let (ag, bg) = (Complex64::from_polar(1.0, tg / 2.0), Complex64::from_polar(1.0, tg / 2.0) * cg);
    let a = af * ag + bf * bg.conj();
    let b = af * bg + bf * ag.conj();
    let scale = a.norm();
    let (a, b) = (a / scale, b / scale);
    let c = b / a;
    let mut theta = 2.0 * a.arg();
    let c_zero = c.norm() == 0.0;
    let probe = CircleDiffeo::from_repr(Repr::Mobius { theta, c });
    let want = f_map.lift(g_map.lift(0.0));
    let k = (want - probe.lift(0.0)).round();
    theta += TAU * k;
    if c_zero {
        return CircleDiffeo::rotation(theta / TAU);
    }
    CircleDiffeo::from_repr(Repr::Mobius { theta, c })
}
