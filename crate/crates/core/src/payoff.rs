//! Terminal payoffs and early-exercise transforms.

use std::fmt;
use std::sync::Arc;

type Terminal1 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Exercise1 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
type TerminalN = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type ExerciseN = Arc<dyn Fn(&[f64], f64) -> f64 + Send + Sync>;

/// Single-underlying payoff, a function of the log-forward state `x` and the spot `s`.
#[derive(Clone)]
pub struct Payoff {
    terminal: Terminal1,
    exercise: Option<Exercise1>,
    nonnegative: bool,
    label: String,
}

impl Payoff {
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            terminal: Arc::new(f),
            exercise: None,
            nonnegative: false,
            label: label.into(),
        }
    }

    pub fn call(strike: f64) -> Self {
        Self::from_fn(format!("call {strike}"), move |_, s| (s - strike).max(0.0)).nonnegative()
    }

    pub fn put(strike: f64) -> Self {
        Self::from_fn(format!("put {strike}"), move |_, s| (strike - s).max(0.0)).nonnegative()
    }

    pub fn constant(c: f64) -> Self {
        let p = Self::from_fn(format!("constant {c}"), move |_, _| c);
        if c >= 0.0 {
            p.nonnegative()
        } else {
            p
        }
    }

    /// American put: exercisable at intrinsic value after every step.
    pub fn american_put(strike: f64) -> Self {
        Self::put(strike).with_exercise(move |_, s, _| (strike - s).max(0.0))
    }

    /// Adds an exercise value `g(x, s, t)`; each backward step keeps `max(value, g)`.
    pub fn with_exercise(
        mut self,
        g: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.exercise = Some(Arc::new(g));
        self
    }

    pub fn nonnegative(mut self) -> Self {
        self.nonnegative = true;
        self
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn has_exercise(&self) -> bool {
        self.exercise.is_some()
    }

    #[inline]
    pub fn terminal(&self, x: f64, s: f64) -> f64 {
        (self.terminal)(x, s)
    }

    #[inline]
    pub fn apply_exercise(&self, value: f64, x: f64, s: f64, t: f64) -> f64 {
        match &self.exercise {
            Some(g) => value.max(g(x, s, t)),
            None => value,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Payoff")
            .field("label", &self.label)
            .field("exercise", &self.exercise.is_some())
            .finish()
    }
}

/// Payoff on two or three underlyings, a function of the spot vector.
#[derive(Clone)]
pub struct MultiPayoff {
    terminal: TerminalN,
    exercise: Option<ExerciseN>,
    nonnegative: bool,
    label: String,
}

impl MultiPayoff {
    pub fn from_fn(
        label: impl Into<String>,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            terminal: Arc::new(f),
            exercise: None,
            nonnegative: false,
            label: label.into(),
        }
    }

    /// `max(Σ wᵢ Sᵢ - K, 0)`.
    pub fn basket(weights: Vec<f64>, strike: f64) -> Self {
        Self::from_fn(format!("basket {strike}"), move |s| {
            let b: f64 = weights.iter().zip(s).map(|(w, s)| w * s).sum();
            (b - strike).max(0.0)
        })
        .nonnegative()
    }

    /// `max(max Sᵢ - K, 0)`.
    pub fn best_of(strike: f64) -> Self {
        Self::from_fn(format!("best_of {strike}"), move |s| {
            let m = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (m - strike).max(0.0)
        })
        .nonnegative()
    }

    /// `max(S1 - S2 - K, 0)`.
    pub fn spread(strike: f64) -> Self {
        Self::from_fn(format!("spread {strike}"), move |s| {
            (s[0] - s[1] - strike).max(0.0)
        })
        .nonnegative()
    }

    pub fn constant(c: f64) -> Self {
        let p = Self::from_fn(format!("constant {c}"), move |_| c);
        if c >= 0.0 {
            p.nonnegative()
        } else {
            p
        }
    }

    pub fn with_exercise(mut self, g: impl Fn(&[f64], f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exercise = Some(Arc::new(g));
        self
    }

    pub fn nonnegative(mut self) -> Self {
        self.nonnegative = true;
        self
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn has_exercise(&self) -> bool {
        self.exercise.is_some()
    }

    #[inline]
    pub fn terminal(&self, s: &[f64]) -> f64 {
        (self.terminal)(s)
    }

    #[inline]
    pub fn apply_exercise(&self, value: f64, s: &[f64], t: f64) -> f64 {
        match &self.exercise {
            Some(g) => value.max(g(s, t)),
            None => value,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for MultiPayoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiPayoff")
            .field("label", &self.label)
            .field("exercise", &self.exercise.is_some())
            .finish()
    }
}
