//! The four built-in synthetic graphons, plus block-model and custom
//! graphon construction.
//!
//! Graphon 1 is a balanced blockmodel whose block count K = floor(ln n)
//! depends on the network size it is used with, so its spec carries that
//! reference size. Graphon 4 has a removable singularity at the origin
//! (cos(1/(u^2+v^2)) is undefined there) and is continued by its limit 0.15.

use ndarray::Array2;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Description of a graphon f : [0,1]^2 -> [0,1].
#[derive(Clone)]
pub enum GraphonSpec {
    /// Balanced blockmodel with K = floor(ln n_ref) blocks; same-block value
    /// k/(K+1) for block k in 1..=K, off-block value 0.3/(K+1).
    Builtin1 { n_ref: usize },
    /// sin(5 pi (u + v - 1) + 1)/2 + 1/2.
    Builtin2,
    /// 1 - 1/(1 + exp(15 (0.8 |u - v|)^{4/5} - 0.1)).
    Builtin3,
    /// (u^2 + v^2)/3 * cos(1/(u^2 + v^2)) + 0.15, continued by 0.15 at the
    /// origin.
    Builtin4,
    /// Step-function graphon over the given boundaries.
    Blockmodel {
        b: Array2<f64>,
        boundaries: Vec<f64>,
    },
    /// Arbitrary user-supplied graphon; outputs are range-checked at every
    /// evaluation.
    Custom(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for GraphonSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GraphonSpec::Builtin1 { n_ref } => write!(f, "Builtin1 {{ n_ref: {n_ref} }}"),
            GraphonSpec::Builtin2 => write!(f, "Builtin2"),
            GraphonSpec::Builtin3 => write!(f, "Builtin3"),
            GraphonSpec::Builtin4 => write!(f, "Builtin4"),
            GraphonSpec::Blockmodel { b, boundaries } => f
                .debug_struct("Blockmodel")
                .field("b", b)
                .field("boundaries", boundaries)
                .finish(),
            GraphonSpec::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl GraphonSpec {
    /// Graphon 1 for networks of size `n_ref`; requires floor(ln n_ref) >= 1,
    /// i.e. n_ref >= 3.
    pub fn builtin_1(n_ref: usize) -> Result<Self> {
        if g1_blocks(n_ref) == 0 {
            return Err(Error::InvalidSpec(format!(
                "graphon 1 needs floor(ln n) >= 1 blocks; n = {n_ref} is too small"
            )));
        }
        Ok(GraphonSpec::Builtin1 { n_ref })
    }

    /// Builds a spec from the identifier accepted by the CLI: "1".."4".
    /// `n_ref` is only consulted for graphon 1.
    pub fn builtin(id: &str, n_ref: usize) -> Result<Self> {
        match id {
            "1" => Self::builtin_1(n_ref),
            "2" => Ok(GraphonSpec::Builtin2),
            "3" => Ok(GraphonSpec::Builtin3),
            "4" => Ok(GraphonSpec::Builtin4),
            other => Err(Error::UnknownIdentifier(format!(
                "graphon '{other}' (valid: 1, 2, 3, 4, blockmodel:<file>)"
            ))),
        }
    }

    /// Constant graphon f == p, as a single-block blockmodel.
    pub fn constant(p: f64) -> Result<Self> {
        make_blockmodel_spec(Array2::from_elem((1, 1), p), vec![0.0, 1.0])
    }

    /// Custom graphon from a closure; outputs are checked at evaluation time.
    pub fn custom(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        GraphonSpec::Custom(Arc::new(f))
    }

    /// Short identifier used in reports.
    pub fn id(&self) -> String {
        match self {
            GraphonSpec::Builtin1 { .. } => "1".into(),
            GraphonSpec::Builtin2 => "2".into(),
            GraphonSpec::Builtin3 => "3".into(),
            GraphonSpec::Builtin4 => "4".into(),
            GraphonSpec::Blockmodel { .. } => "blockmodel".into(),
            GraphonSpec::Custom(_) => "custom".into(),
        }
    }
}

/// Number of blocks K = floor(ln n) used by graphon 1.
pub fn g1_blocks(n_ref: usize) -> usize {
    (n_ref as f64).ln().floor() as usize
}

/// Validates and wraps a step-function graphon.
///
/// `boundaries` must be K+1 strictly increasing values starting at 0 and
/// ending at 1; block s covers [x_s, x_{s+1}), with the last interval closed.
pub fn make_blockmodel_spec(b: Array2<f64>, boundaries: Vec<f64>) -> Result<GraphonSpec> {
    let k = b.nrows();
    if k == 0 {
        return Err(Error::InvalidSpec("block matrix must be nonempty".into()));
    }
    if b.ncols() != k {
        return Err(Error::InvalidSpec(format!(
            "block matrix must be square, got {}x{}",
            k,
            b.ncols()
        )));
    }
    for s in 0..k {
        for t in 0..k {
            let v = b[[s, t]];
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidSpec(format!(
                    "block probability B[{s}][{t}] = {v} outside [0,1]"
                )));
            }
            if t > s && b[[t, s]] != v {
                return Err(Error::InvalidSpec(format!(
                    "block matrix asymmetric at ({s},{t})"
                )));
            }
        }
    }
    if boundaries.len() != k + 1 {
        return Err(Error::InvalidSpec(format!(
            "expected {} boundaries for {} blocks, got {}",
            k + 1,
            k,
            boundaries.len()
        )));
    }
    if boundaries[0] != 0.0 || boundaries[k] != 1.0 {
        return Err(Error::InvalidSpec(
            "boundaries must start at 0 and end at 1".into(),
        ));
    }
    if boundaries.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSpec(
            "boundaries must be strictly increasing".into(),
        ));
    }
    Ok(GraphonSpec::Blockmodel { b, boundaries })
}

/// Evaluates f(u, v) for the given spec.
pub fn eval_graphon(spec: &GraphonSpec, u: f64, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) || !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!(
            "graphon arguments ({u}, {v}) outside [0,1]^2"
        )));
    }
    match spec {
        GraphonSpec::Builtin1 { n_ref } => {
            let k = g1_blocks(*n_ref);
            if k == 0 {
                return Err(Error::InvalidSpec(format!(
                    "graphon 1 needs floor(ln n) >= 1 blocks; n = {n_ref} is too small"
                )));
            }
            // Half-open bins [(b-1)/K, b/K), last bin closed at 1.
            let bu = ((u * k as f64).floor() as usize).min(k - 1);
            let bv = ((v * k as f64).floor() as usize).min(k - 1);
            if bu == bv {
                Ok((bu + 1) as f64 / (k + 1) as f64)
            } else {
                Ok(0.3 / (k + 1) as f64)
            }
        }
        GraphonSpec::Builtin2 => {
            Ok((5.0 * std::f64::consts::PI * (u + v - 1.0) + 1.0).sin() / 2.0 + 0.5)
        }
        GraphonSpec::Builtin3 => {
            let d = (u - v).abs();
            Ok(1.0 - 1.0 / (1.0 + (15.0 * (0.8 * d).powf(0.8) - 0.1).exp()))
        }
        GraphonSpec::Builtin4 => {
            let r2 = u * u + v * v;
            // Below this radius 1/r2 overflows; the function's limit is 0.15.
            if r2 < 1e-300 {
                return Ok(0.15);
            }
            Ok(r2 / 3.0 * (1.0 / r2).cos() + 0.15)
        }
        GraphonSpec::Blockmodel { b, boundaries } => {
            let s = interval_index(boundaries, u);
            let t = interval_index(boundaries, v);
            Ok(b[[s, t]])
        }
        GraphonSpec::Custom(f) => {
            let val = f(u, v);
            if !val.is_finite() || !(0.0..=1.0).contains(&val) {
                return Err(Error::ModelViolation(format!(
                    "custom graphon returned {val} at ({u}, {v})"
                )));
            }
            Ok(val)
        }
    }
}

/// Index s with x_s <= u < x_{s+1}; the last interval is closed.
fn interval_index(boundaries: &[f64], u: f64) -> usize {
    let k = boundaries.len() - 1;
    boundaries.partition_point(|&x| x <= u).saturating_sub(1).min(k - 1)
}
