//! Radial weights, domain geometry, and the built-in weight catalog.
//!
//! Weights are supplied as radial evaluators `r ↦ g(r)` together with an
//! ordered list of intervals on which the profile is monotone and a list of
//! declared singularities.  The monotone pieces make exact level-set
//! inversion possible; the singularity annotations drive singularity-aware
//! quadrature downstream.  `+∞` is a first-class value: weights may blow up
//! at declared singular points.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub(crate) type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Geometry of the underlying open set Ω ⊂ ℝ^N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    /// `B(0; R)`
    Ball,
    /// all of ℝ^N
    FullSpace,
    /// `B_R \ B̄_1` with `1 < R ≤ ∞`
    Exterior,
    /// `B_R \ B̄_1` with `1 < R < ∞`
    Annulus,
}

/// Domain descriptor: kind, dimension, radii and Lebesgue measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub dimension: usize,
    /// fixed at 1 for exterior domains and annuli
    pub inner_radius: f64,
    /// `+∞` for the full space and unbounded exterior domains
    pub outer_radius: f64,
}

impl DomainSpec {
    pub fn ball(dimension: usize, radius: f64) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidDomain("dimension must be ≥ 1".into()));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidDomain("ball radius must be finite positive".into()));
        }
        Ok(Self {
            kind: DomainKind::Ball,
            dimension,
            inner_radius: 0.0,
            outer_radius: radius,
        })
    }

    pub fn full_space(dimension: usize) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidDomain("dimension must be ≥ 1".into()));
        }
        Ok(Self {
            kind: DomainKind::FullSpace,
            dimension,
            inner_radius: 0.0,
            outer_radius: f64::INFINITY,
        })
    }

    /// Exterior domain `B_R \ B̄_1`.  `R = ∞` is allowed; `R ≤ 1` is not
    /// (that would be an empty interior).
    pub fn exterior(dimension: usize, outer_radius: f64) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidDomain("dimension must be ≥ 1".into()));
        }
        if !(outer_radius > 1.0) {
            return Err(Error::InvalidDomain(
                "exterior domain requires outer radius > 1".into(),
            ));
        }
        Ok(Self {
            kind: DomainKind::Exterior,
            dimension,
            inner_radius: 1.0,
            outer_radius,
        })
    }

    pub fn annulus(dimension: usize, outer_radius: f64) -> Result<Self> {
        if dimension < 1 {
            return Err(Error::InvalidDomain("dimension must be ≥ 1".into()));
        }
        if !(outer_radius > 1.0) || !outer_radius.is_finite() {
            return Err(Error::InvalidDomain(
                "annulus requires finite outer radius > 1".into(),
            ));
        }
        Ok(Self {
            kind: DomainKind::Annulus,
            dimension,
            inner_radius: 1.0,
            outer_radius,
        })
    }

    /// Lebesgue measure |Ω| (extended real).
    pub fn measure(&self) -> f64 {
        let n = self.dimension as i32;
        let w = omega_n(self.dimension).expect("validated dimension");
        match self.kind {
            DomainKind::Ball => w * self.outer_radius.powi(n),
            DomainKind::FullSpace => f64::INFINITY,
            DomainKind::Exterior | DomainKind::Annulus => {
                if self.outer_radius.is_infinite() {
                    f64::INFINITY
                } else {
                    w * (self.outer_radius.powi(n) - 1.0)
                }
            }
        }
    }

    /// Radial range `(r_lo, r_hi)` swept by Ω.
    pub fn radial_range(&self) -> (f64, f64) {
        (self.inner_radius, self.outer_radius)
    }

    pub fn is_bounded(&self) -> bool {
        self.outer_radius.is_finite()
    }

    /// Radius of the ball Ω* with the same measure as Ω (∞ when |Ω| = ∞).
    pub fn symmetrized_radius(&self) -> f64 {
        let m = self.measure();
        if m.is_infinite() {
            f64::INFINITY
        } else {
            (m / omega_n(self.dimension).expect("validated")).powf(1.0 / self.dimension as f64)
        }
    }
}

/// Measure of the unit ball in ℝ^N, `ω_N = π^{N/2} / Γ(N/2 + 1)`.
///
/// Computed by the recurrence `ω_N = 2π/N · ω_{N-2}`, which is exact in the
/// sense of floating point and immune to Γ overflow.
pub fn omega_n(dimension: usize) -> Result<f64> {
    if dimension < 1 {
        return Err(Error::OutOfDomain("omega_n requires N ≥ 1".into()));
    }
    let mut w = if dimension % 2 == 1 { 2.0 } else { PI };
    let mut n = if dimension % 2 == 1 { 1 } else { 2 };
    while n < dimension {
        n += 2;
        w *= 2.0 * PI / n as f64;
    }
    Ok(w)
}

/// Interval on which the weight profile is declared monotone
/// (nonincreasing, nondecreasing, or constant).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonePiece {
    pub lo: f64,
    pub hi: f64,
}

impl MonotonePiece {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }
}

/// Declared local behavior `g(r) ≈ C·|r - location|^power·|ln|r-location||^log_power`.
///
/// `location = +∞` declares the decay rate as `r → ∞`
/// (`g(r) ≈ C·r^power·(ln r)^log_power`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub location: f64,
    pub power: f64,
    pub log_power: f64,
}

impl Singularity {
    pub fn algebraic(location: f64, power: f64) -> Self {
        Self {
            location,
            power,
            log_power: 0.0,
        }
    }
}

/// An evaluable nonnegative radial profile with monotonicity and singularity
/// metadata.  Immutable after construction; safe to share across threads.
#[derive(Clone)]
pub struct RadialWeight {
    pub(crate) evaluator: Evaluator,
    pub(crate) pieces: Vec<MonotonePiece>,
    pub(crate) singularities: Vec<Singularity>,
    pub(crate) closed_form_rearrangement: Option<Evaluator>,
}

impl fmt::Debug for RadialWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialWeight")
            .field("pieces", &self.pieces)
            .field("singularities", &self.singularities)
            .field(
                "closed_form_rearrangement",
                &self.closed_form_rearrangement.is_some(),
            )
            .finish()
    }
}

/// Number of interior sample points used by the monotonicity sign test.
const MONOTONE_SAMPLES: usize = 64;

impl RadialWeight {
    /// Build a weight from an evaluator and declared monotone pieces.
    ///
    /// Validation samples each piece and rejects evaluators that are negative
    /// or change monotonicity direction inside a declared piece.
    pub fn new(
        evaluator: impl Fn(f64) -> f64 + Send + Sync + 'static,
        pieces: Vec<MonotonePiece>,
        singularities: Vec<Singularity>,
    ) -> Result<Self> {
        let w = Self {
            evaluator: Arc::new(evaluator),
            pieces,
            singularities,
            closed_form_rearrangement: None,
        };
        w.validate()?;
        Ok(w)
    }

    /// Like [`RadialWeight::new`] but clamps the evaluator at zero first,
    /// so classification of a sign-changing profile `g` is classification
    /// of its positive part `g⁺`.
    pub fn new_clamped(
        evaluator: impl Fn(f64) -> f64 + Send + Sync + 'static,
        pieces: Vec<MonotonePiece>,
        singularities: Vec<Singularity>,
    ) -> Result<Self> {
        Self::new(move |r| evaluator(r).max(0.0), pieces, singularities)
    }

    /// Attach a closed-form decreasing rearrangement `t ↦ g*(t)`, used as a
    /// test oracle against the numeric rearrangement.
    pub fn with_closed_form_rearrangement(
        mut self,
        star: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.closed_form_rearrangement = Some(Arc::new(star));
        self
    }

    /// Build from a tabulated two-column profile (radius, value) with
    /// strictly increasing radii.  The evaluator interpolates linearly and
    /// monotone runs of the table become the declared pieces.
    pub fn from_table(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidWeight("table needs at least two rows".into()));
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidWeight(
                    "table radii must be strictly increasing".into(),
                ));
            }
        }
        if points.iter().any(|p| p.1 < 0.0 || !p.1.is_finite()) {
            return Err(Error::InvalidWeight(
                "table values must be finite and nonnegative".into(),
            ));
        }
        let mut pieces = Vec::new();
        let mut run_start = 0usize;
        let mut dir = 0i8;
        for i in 1..points.len() {
            let d = (points[i].1 - points[i - 1].1).signum() as i8;
            if dir == 0 {
                dir = d;
            } else if d != 0 && d != dir {
                pieces.push(MonotonePiece::new(points[run_start].0, points[i - 1].0));
                run_start = i - 1;
                dir = d;
            }
        }
        pieces.push(MonotonePiece::new(points[run_start].0, points[points.len() - 1].0));

        let table = points;
        let evaluator = move |r: f64| -> f64 {
            let first = table[0];
            let last = table[table.len() - 1];
            if r <= first.0 {
                return first.1;
            }
            if r >= last.0 {
                return last.1;
            }
            let idx = table.partition_point(|p| p.0 < r);
            let (a, b) = (table[idx - 1], table[idx]);
            a.1 + (b.1 - a.1) * (r - a.0) / (b.0 - a.0)
        };
        Self::new(evaluator, pieces, Vec::new())
    }

    /// Build from a smooth profile on `[lo, hi]` by numerically detecting the
    /// monotone pieces: the sign of a finite-difference derivative is scanned
    /// on a fine grid and each sign change is located by bisection.
    ///
    /// `kinks` lists radii where the profile is non-smooth; they always become
    /// piece boundaries.
    pub fn from_smooth_profile(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lo: f64,
        hi: f64,
        kinks: &[f64],
    ) -> Result<Self> {
        assert!(hi > lo);
        let n = 2048usize;
        let h = (hi - lo) / n as f64;
        let fd = |x: f64| (f(x + 0.5 * h * 1e-3) - f(x - 0.5 * h * 1e-3)) / (h * 1e-3);

        let mut bounds = vec![lo];
        for &k in kinks {
            if k > lo && k < hi {
                bounds.push(k);
            }
        }
        bounds.push(hi);
        bounds.sort_by(f64::total_cmp);
        bounds.dedup();

        let mut cuts = Vec::new();
        for seg in bounds.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let m = ((b - a) / h).ceil() as usize + 1;
            let m = m.clamp(8, n);
            let step = (b - a) / m as f64;
            let mut prev_x = a + 0.5 * step;
            let mut prev_s = fd(prev_x).signum();
            for i in 1..m {
                let x = a + (i as f64 + 0.5) * step;
                let s = fd(x).signum();
                if s != 0.0 && prev_s != 0.0 && s != prev_s {
                    // bisect the derivative sign change
                    let (mut xa, mut xb) = (prev_x, x);
                    for _ in 0..60 {
                        let mid = 0.5 * (xa + xb);
                        if fd(mid).signum() == prev_s {
                            xa = mid;
                        } else {
                            xb = mid;
                        }
                    }
                    cuts.push(0.5 * (xa + xb));
                }
                prev_x = x;
                prev_s = s;
            }
        }
        let mut all = bounds;
        all.extend(cuts);
        all.sort_by(f64::total_cmp);
        all.dedup();
        let pieces = all
            .windows(2)
            .map(|w| MonotonePiece::new(w[0], w[1]))
            .collect();
        Self::new(f, pieces, Vec::new())
    }

    /// Evaluate the weight at radius `r`.
    pub fn eval(&self, r: f64) -> f64 {
        (self.evaluator)(r)
    }

    pub fn pieces(&self) -> &[MonotonePiece] {
        &self.pieces
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn closed_form_rearrangement(&self) -> Option<&(dyn Fn(f64) -> f64 + Send + Sync)> {
        self.closed_form_rearrangement.as_deref()
    }

    /// Pieces clipped to `(lo, hi)`, in increasing order.
    pub(crate) fn pieces_within(&self, lo: f64, hi: f64) -> Vec<MonotonePiece> {
        self.pieces
            .iter()
            .filter_map(|p| {
                let a = p.lo.max(lo);
                let b = p.hi.min(hi);
                if b > a {
                    Some(MonotonePiece::new(a, b))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Whether every declared piece is nonincreasing (sampled test), i.e.
    /// the weight is radially decreasing.
    pub fn is_nonincreasing(&self) -> bool {
        for p in &self.pieces {
            let (a, b) = sample_bounds(p);
            let mut prev = f64::INFINITY;
            for i in 0..=MONOTONE_SAMPLES {
                let x = a + (b - a) * i as f64 / MONOTONE_SAMPLES as f64;
                let v = self.eval(x);
                if v > prev * (1.0 + 1e-9) + 1e-300 {
                    return false;
                }
                prev = v;
            }
        }
        true
    }

    fn validate(&self) -> Result<()> {
        if self.pieces.is_empty() {
            return Err(Error::InvalidWeight("at least one monotone piece".into()));
        }
        for w in self.pieces.windows(2) {
            if w[1].lo < w[0].hi - 1e-12 * w[0].hi.abs().max(1.0) {
                return Err(Error::InvalidWeight("pieces must be ordered and disjoint".into()));
            }
        }
        for p in &self.pieces {
            if !(p.hi > p.lo) || p.lo < 0.0 {
                return Err(Error::InvalidWeight(format!(
                    "bad piece [{}, {}]",
                    p.lo, p.hi
                )));
            }
            let (a, b) = sample_bounds(p);
            let mut dir = 0i8;
            let mut prev = self.eval(a);
            if prev < 0.0 {
                return Err(Error::InvalidWeight(format!("negative value at r = {a}")));
            }
            for i in 1..=MONOTONE_SAMPLES {
                let x = a + (b - a) * i as f64 / MONOTONE_SAMPLES as f64;
                let v = self.eval(x);
                if v < 0.0 {
                    return Err(Error::InvalidWeight(format!("negative value at r = {x}")));
                }
                let tol = 1e-9 * prev.abs().max(v.abs()).max(1e-300);
                let d = if v > prev + tol {
                    1i8
                } else if v < prev - tol {
                    -1i8
                } else {
                    0i8
                };
                if d != 0 {
                    if dir == 0 {
                        dir = d;
                    } else if d != dir {
                        return Err(Error::InvalidWeight(format!(
                            "piece [{}, {}] is not monotone near r = {x}",
                            p.lo, p.hi
                        )));
                    }
                }
                prev = v;
            }
        }
        Ok(())
    }
}

/// Clip a piece to finite, evaluable sample bounds (singular endpoints are
/// sampled slightly inside; infinite pieces are probed over two decades).
fn sample_bounds(p: &MonotonePiece) -> (f64, f64) {
    let lo = if p.lo == 0.0 {
        (p.hi.min(1e6)) * 1e-9
    } else {
        p.lo * (1.0 + 1e-9)
    };
    let hi = if p.hi.is_infinite() {
        (p.lo.max(lo) * 100.0).max(100.0)
    } else {
        p.hi - (p.hi - p.lo).min(p.hi) * 1e-9
    };
    (lo, hi.max(lo * (1.0 + 1e-12)))
}

/// Expected outcome attached to a catalog entry.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expected {
    Finite,
    Infinite,
    Admissible,
    NotAdmissible,
}

/// `(criterion id, expected outcome)` annotation for catalog weights.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KnownFact {
    pub criterion: String,
    pub expected: Expected,
}

impl KnownFact {
    fn new(criterion: &str, expected: Expected) -> Self {
        Self {
            criterion: criterion.into(),
            expected,
        }
    }
}

/// A named weight together with its domain and expected-outcome annotations.
#[derive(Debug, Clone)]
pub struct WeightCatalogEntry {
    pub name: String,
    pub weight: RadialWeight,
    pub domain: DomainSpec,
    pub known_facts: Vec<KnownFact>,
}

/// Names (with default parameters) of the built-in catalog, in report order.
pub fn catalog_names() -> Vec<&'static str> {
    vec![
        "power(alpha=4,N=5,R=inf)",
        "power(alpha=4,N=5,R=1)",
        "power(alpha=2,N=5,R=1)",
        "shifted-power(beta=0.9,N=5)",
        "shifted-power-symmetrized(beta=0.9,N=5)",
        "log4(R=1)",
        "fn(n=1,N=5,R=1)",
        "zero(N=5,R=1)",
        "constant(c=1,N=5,R=1)",
    ]
}

/// Look up a catalog weight by name, e.g. `power(alpha=4,N=5,R=inf)` or
/// `shifted-power:beta=0.9,N=5`.  Omitted parameters take the defaults shown
/// by [`catalog_names`].
pub fn catalog_lookup(name: &str) -> Result<WeightCatalogEntry> {
    let (kind, params) = parse_weight_ref(name)?;
    let get = |key: &str, default: f64| -> Result<f64> {
        match params.iter().find(|(k, _)| k == key) {
            Some((_, v)) => Ok(*v),
            None => Ok(default),
        }
    };
    match kind.as_str() {
        "power" => {
            let alpha = get("alpha", 4.0)?;
            let n = get("n", 5.0)? as usize;
            let radius = get("r", f64::INFINITY)?;
            power_entry(alpha, n, radius)
        }
        "shifted-power" => {
            let beta = get("beta", 0.9)?;
            let n = get("n", 5.0)? as usize;
            shifted_power_entry(beta, n)
        }
        "shifted-power-symmetrized" => {
            let beta = get("beta", 0.9)?;
            let n = get("n", 5.0)? as usize;
            shifted_power_symmetrized_entry(beta, n)
        }
        "log4" => log4_entry(get("r", 1.0)?),
        "fn" => fn_family_entry(get("n", 1.0)? as usize, get("dim", 5.0)? as usize, get("r", 1.0)?),
        "zero" => zero_entry(get("n", 5.0)? as usize, get("r", 1.0)?),
        "constant" => constant_entry(get("c", 1.0)?, get("n", 5.0)? as usize, get("r", 1.0)?),
        other => Err(Error::UnknownWeight(other.into())),
    }
}

/// Parse `name`, `name(k=v,...)` or `name:k=v,...` into kind + parameters.
/// Keys are lowercased; `N` maps to `n` and (for the `fn` family, where `n`
/// is the sequence index) the dimension key is `dim`.
pub(crate) fn parse_weight_ref(s: &str) -> Result<(String, Vec<(String, f64)>)> {
    let s = s.trim();
    let (kind, rest) = if let Some(open) = s.find('(') {
        if !s.ends_with(')') {
            return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
        }
        (&s[..open], &s[open + 1..s.len() - 1])
    } else if let Some(colon) = s.find(':') {
        (&s[..colon], &s[colon + 1..])
    } else {
        (s, "")
    };
    let kind = kind.trim().to_ascii_lowercase();
    if kind.is_empty() {
        return Err(Error::Parse("empty weight name".into()));
    }
    let mut params = Vec::new();
    for item in rest.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
        let key = k.trim().to_ascii_lowercase();
        let vs = v.trim().to_ascii_lowercase();
        let val = match vs.as_str() {
            "inf" | "infinity" | "+inf" => f64::INFINITY,
            _ => vs
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{v}` for `{k}`")))?,
        };
        params.push((key, val));
    }
    Ok((kind, params))
}

/// `g(x) = |x|^{-α}` on `B(0;R)` (or ℝ^N when `R = ∞`), `0 < α < N`.
pub fn power_weight(alpha: f64, dimension: usize) -> Result<RadialWeight> {
    if !(alpha > 0.0) || alpha >= dimension as f64 {
        return Err(Error::InvalidWeight("power weight needs 0 < alpha < N".into()));
    }
    Ok(RadialWeight::new(
        move |r: f64| {
            if r <= 0.0 {
                f64::INFINITY
            } else {
                r.powf(-alpha)
            }
        },
        vec![MonotonePiece::new(0.0, f64::INFINITY)],
        vec![
            Singularity::algebraic(0.0, -alpha),
            Singularity::algebraic(f64::INFINITY, -alpha),
        ],
    )?)
}

fn power_entry(alpha: f64, n: usize, radius: f64) -> Result<WeightCatalogEntry> {
    let w = omega_n(n)?;
    let nf = n as f64;
    let bounded = radius.is_finite();
    let domain = if bounded {
        DomainSpec::ball(n, radius)?
    } else {
        DomainSpec::full_space(n)?
    };
    let measure = domain.measure();
    let star = move |t: f64| -> f64 {
        if t <= 0.0 {
            f64::INFINITY
        } else if t < measure {
            (w / t).powf(alpha / nf)
        } else {
            0.0
        }
    };
    let weight = power_weight(alpha, n)?.with_closed_form_rearrangement(star);
    let weak_member = if bounded { alpha <= 4.0 } else { alpha == 4.0 };
    let integral_member = bounded && alpha < 4.0;
    let known_facts = vec![
        KnownFact::new(
            "WeakLorentzN5",
            if weak_member {
                Expected::Finite
            } else {
                Expected::Infinite
            },
        ),
        KnownFact::new(
            "IntegralR3",
            if integral_member {
                Expected::Finite
            } else {
                Expected::Infinite
            },
        ),
    ];
    Ok(WeightCatalogEntry {
        name: format!("power(alpha={alpha},N={n},R={radius})"),
        weight,
        domain,
        known_facts,
    })
}

/// `g₁(x) = (|x|-1)^{-β} χ_{1<|x|≤2}` on ℝ^N with `β ∈ (4/N, 1)`.
pub fn shifted_power_weight(beta: f64, dimension: usize) -> Result<RadialWeight> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidWeight("shifted power needs beta in (0,1)".into()));
    }
    let _ = dimension;
    Ok(RadialWeight::new(
        move |r: f64| {
            if r <= 1.0 || r > 2.0 {
                0.0
            } else {
                (r - 1.0).powf(-beta)
            }
        },
        vec![
            MonotonePiece::new(0.0, 1.0),
            MonotonePiece::new(1.0, 2.0),
            MonotonePiece::new(2.0, f64::INFINITY),
        ],
        vec![Singularity::algebraic(1.0, -beta)],
    )?)
}

fn shifted_power_entry(beta: f64, n: usize) -> Result<WeightCatalogEntry> {
    let w = omega_n(n)?;
    let nf = n as f64;
    let support = w * (2f64.powi(n as i32) - 1.0);
    let star = move |t: f64| -> f64 {
        if t <= 0.0 {
            f64::INFINITY
        } else if t <= support {
            // ((t/ω + 1)^{1/N} - 1)^{-β}, cancellation-free for small t
            (((t / w).ln_1p() / nf).exp_m1()).powf(-beta)
        } else {
            0.0
        }
    };
    let weight = shifted_power_weight(beta, n)?.with_closed_form_rearrangement(star);
    let known_facts = vec![
        KnownFact::new("WeakLorentzN5", Expected::Infinite),
        KnownFact::new("IntegralR3", Expected::Finite),
        KnownFact::new("classify", Expected::Admissible),
    ];
    Ok(WeightCatalogEntry {
        name: format!("shifted-power(beta={beta},N={n})"),
        weight,
        domain: DomainSpec::full_space(n)?,
        known_facts,
    })
}

/// The Schwarz symmetrization of the shifted power weight, realized directly
/// as the radially decreasing profile `g₁*(ω_N |x|^N)` on ℝ^N.  Admissible it
/// is not: its weak-Lorentz quasinorm is infinite and it majorizes no
/// integrable `w r³` profile.
fn shifted_power_symmetrized_entry(beta: f64, n: usize) -> Result<WeightCatalogEntry> {
    let w = omega_n(n)?;
    let nf = n as f64;
    let support = w * (2f64.powi(n as i32) - 1.0);
    let radius_support = (support / w).powf(1.0 / nf);
    let star = move |t: f64| -> f64 {
        if t <= 0.0 {
            f64::INFINITY
        } else if t <= support {
            (((t / w).ln_1p() / nf).exp_m1()).powf(-beta)
        } else {
            0.0
        }
    };
    let weight = RadialWeight::new(
        move |r: f64| {
            if r <= 0.0 {
                f64::INFINITY
            } else {
                star(w * r.powf(nf))
            }
        },
        vec![
            MonotonePiece::new(0.0, radius_support),
            MonotonePiece::new(radius_support, f64::INFINITY),
        ],
        // near the origin g₁*(ω r^N) ~ (ω r^N / (N ω))^{-β} = c r^{-Nβ}
        vec![Singularity::algebraic(0.0, -nf * beta)],
    )?
    .with_closed_form_rearrangement(star);
    Ok(WeightCatalogEntry {
        name: format!("shifted-power-symmetrized(beta={beta},N={n})"),
        weight,
        domain: DomainSpec::full_space(n)?,
        known_facts: vec![
            KnownFact::new("WeakLorentzN5", Expected::Infinite),
            KnownFact::new("IntegralR3", Expected::Infinite),
            KnownFact::new("classify", Expected::NotAdmissible),
        ],
    })
}

/// `g(x) = [ |x|² log((R/|x|)⁴ e) ]^{-2}` on `B(0;R) ⊂ ℝ⁴`.
fn log4_entry(radius: f64) -> Result<WeightCatalogEntry> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidWeight("log4 needs finite positive R".into()));
    }
    let weight = RadialWeight::new(
        move |r: f64| {
            if r <= 0.0 {
                f64::INFINITY
            } else if r >= radius {
                // continuation by the boundary value keeps the evaluator total
                radius.powi(-4)
            } else {
                let l = 1.0 + 4.0 * (radius / r).ln();
                1.0 / (r.powi(4) * l * l)
            }
        },
        // the profile decreases down to r = R e^{-1/4} and increases beyond
        vec![
            MonotonePiece::new(0.0, radius * (-0.25f64).exp()),
            MonotonePiece::new(radius * (-0.25f64).exp(), radius),
        ],
        vec![Singularity {
            location: 0.0,
            power: -4.0,
            log_power: -2.0,
        }],
    )?;
    Ok(WeightCatalogEntry {
        name: format!("log4(R={radius})"),
        weight,
        domain: DomainSpec::ball(4, radius)?,
        known_facts: vec![
            KnownFact::new("MLogL4", Expected::Finite),
            KnownFact::new("classify", Expected::Admissible),
        ],
    })
}

/// `f_n(x) = |x|^{-N} [log((R/|x|)^N e)]^{-(n+2)}` on `B(0;R)`.
fn fn_family_entry(n_index: usize, dimension: usize, radius: f64) -> Result<WeightCatalogEntry> {
    if n_index == 0 {
        return Err(Error::InvalidWeight("fn family starts at n = 1".into()));
    }
    let nf = dimension as f64;
    let p = n_index as f64 + 2.0;
    // decreasing down to r = R e^{-(n+1)/N}, increasing beyond
    let split = radius * (-(n_index as f64 + 1.0) / nf).exp();
    let weight = RadialWeight::new(
        move |r: f64| {
            if r <= 0.0 {
                f64::INFINITY
            } else if r >= radius {
                radius.powf(-nf)
            } else {
                let l = 1.0 + nf * (radius / r).ln();
                r.powf(-nf) * l.powf(-p)
            }
        },
        vec![
            MonotonePiece::new(0.0, split),
            MonotonePiece::new(split, radius),
        ],
        vec![Singularity {
            location: 0.0,
            power: -nf,
            log_power: -p,
        }],
    )?;
    Ok(WeightCatalogEntry {
        name: format!("fn(n={n_index},N={dimension},R={radius})"),
        weight,
        domain: DomainSpec::ball(dimension, radius)?,
        known_facts: vec![KnownFact::new("MLogL4", Expected::Finite)],
    })
}

fn zero_entry(n: usize, radius: f64) -> Result<WeightCatalogEntry> {
    let weight = RadialWeight::new(
        |_r| 0.0,
        vec![MonotonePiece::new(0.0, f64::INFINITY)],
        Vec::new(),
    )?
    .with_closed_form_rearrangement(|_t| 0.0);
    Ok(WeightCatalogEntry {
        name: format!("zero(N={n},R={radius})"),
        weight,
        domain: DomainSpec::ball(n, radius)?,
        known_facts: vec![KnownFact::new("classify", Expected::Admissible)],
    })
}

fn constant_entry(c: f64, n: usize, radius: f64) -> Result<WeightCatalogEntry> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::InvalidWeight("constant weight needs c ≥ 0".into()));
    }
    let weight = RadialWeight::new(
        move |_r| c,
        vec![MonotonePiece::new(0.0, f64::INFINITY)],
        Vec::new(),
    )?
    .with_closed_form_rearrangement(move |_t| c);
    Ok(WeightCatalogEntry {
        name: format!("constant(c={c},N={n},R={radius})"),
        weight,
        domain: DomainSpec::ball(n, radius)?,
        known_facts: vec![KnownFact::new("classify", Expected::Admissible)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_ball_measures() {
        assert_eq!(omega_n(1).unwrap(), 2.0);
        assert!((omega_n(2).unwrap() - PI).abs() < 1e-15);
        // Γ(3) = 2, so ω₄ = π²/2
        assert!((omega_n(4).unwrap() - PI * PI / 2.0).abs() < 1e-14);
        assert!((omega_n(3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((omega_n(5).unwrap() - 8.0 * PI * PI / 15.0).abs() < 1e-14);
        assert!(omega_n(0).is_err());
    }

    #[test]
    fn domain_measures() {
        let b = DomainSpec::ball(5, 2.0).unwrap();
        assert!((b.measure() - omega_n(5).unwrap() * 32.0).abs() < 1e-12);
        assert!(DomainSpec::full_space(4).unwrap().measure().is_infinite());
        let a = DomainSpec::annulus(4, 2.0).unwrap();
        assert!((a.measure() - omega_n(4).unwrap() * 15.0).abs() < 1e-12);
        assert!(DomainSpec::exterior(3, f64::INFINITY).unwrap().measure().is_infinite());
        // R = 1 would be an empty annulus
        assert!(DomainSpec::exterior(3, 1.0).is_err());
        assert!(DomainSpec::annulus(3, 0.5).is_err());
    }

    #[test]
    fn catalog_lookup_power() {
        let e = catalog_lookup("power(alpha=4,N=5,R=inf)").unwrap();
        assert_eq!(e.domain.kind, DomainKind::FullSpace);
        assert!(e
            .known_facts
            .iter()
            .any(|f| f.criterion == "WeakLorentzN5" && f.expected == Expected::Finite));
        // colon syntax
        let e2 = catalog_lookup("power:alpha=4,N=5,R=inf").unwrap();
        assert_eq!(e.name, e2.name);
    }

    #[test]
    fn catalog_lookup_shifted_power() {
        let e = catalog_lookup("shifted-power(beta=0.9,N=5)").unwrap();
        assert!(e
            .known_facts
            .iter()
            .any(|f| f.criterion == "WeakLorentzN5" && f.expected == Expected::Infinite));
        assert!(e
            .known_facts
            .iter()
            .any(|f| f.criterion == "IntegralR3" && f.expected == Expected::Finite));
    }

    #[test]
    fn catalog_lookup_zero_and_unknown() {
        let e = catalog_lookup("zero").unwrap();
        assert_eq!(e.weight.eval(0.3), 0.0);
        assert!(matches!(
            catalog_lookup("no-such-weight"),
            Err(Error::UnknownWeight(_))
        ));
    }

    #[test]
    fn monotone_validation_rejects_bad_pieces() {
        // a hump declared as one monotone piece
        let r = RadialWeight::new(
            |r: f64| (1.0 - (r - 1.0) * (r - 1.0)).max(0.0),
            vec![MonotonePiece::new(0.5, 1.5)],
            vec![],
        );
        assert!(r.is_err());
        // negative evaluator
        let r = RadialWeight::new(|_| -1.0, vec![MonotonePiece::new(0.0, 1.0)], vec![]);
        assert!(r.is_err());
    }

    #[test]
    fn catalog_weights_finite_and_nonnegative_off_singularities() {
        for name in catalog_names() {
            let e = catalog_lookup(name).unwrap();
            let (lo, hi) = e.domain.radial_range();
            let hi = if hi.is_finite() { hi } else { 1e3 };
            let lo = if lo > 0.0 { lo * (1.0 + 1e-9) } else { hi * 1e-9 };
            for r in crate::quad::logspace(lo, hi * (1.0 - 1e-12), 10_000) {
                let near_singularity = e
                    .weight
                    .singularities()
                    .iter()
                    .any(|s| s.location.is_finite() && (r - s.location).abs() < 1e-6 * hi);
                let v = e.weight.eval(r);
                assert!(v >= 0.0, "{name}: negative at r={r}");
                if !near_singularity {
                    assert!(v.is_finite(), "{name}: not finite at r={r}");
                }
            }
        }
    }

    #[test]
    fn table_weight_detects_runs() {
        let w = RadialWeight::from_table(vec![
            (0.0, 1.0),
            (1.0, 3.0),
            (2.0, 2.0),
            (3.0, 0.5),
        ])
        .unwrap();
        assert_eq!(w.pieces().len(), 2);
        assert!((w.eval(0.5) - 2.0).abs() < 1e-12);
        assert!(!w.is_nonincreasing());
    }

    #[test]
    fn smooth_profile_detection() {
        // |Δu|-style profile with an interior maximum at r = 1
        let w = RadialWeight::from_smooth_profile(
            |r: f64| (r * (2.0 - r)).max(0.0),
            0.0,
            2.0,
            &[],
        )
        .unwrap();
        assert!(w.pieces().len() >= 2);
        let cut = w.pieces()[0].hi;
        assert!((cut - 1.0).abs() < 1e-6, "extremum found at {cut}");
    }

    #[test]
    fn parse_weight_refs() {
        let (k, p) = parse_weight_ref("power(alpha=4, N=5, R=inf)").unwrap();
        assert_eq!(k, "power");
        assert_eq!(p.len(), 3);
        assert!(p.iter().any(|(k, v)| k == "r" && v.is_infinite()));
        assert!(parse_weight_ref("power(alpha=x)").is_err());
        assert!(parse_weight_ref("").is_err());
    }
}
