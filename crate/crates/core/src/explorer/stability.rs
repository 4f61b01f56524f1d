use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::isometry::random::random_isometry;
use crate::isometry::{classify_isometry, ClassTag, Isometry};
use crate::par;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub trials: usize,
    pub loxodromic: usize,
    pub ambiguous: usize,
    pub fraction: f64,
}

/// Composes `f` with `trials` random isometries `E` with `‖E − I‖ ≤ δ` and
/// reports how many products still classify as loxodromic.
///
/// Trial `i` draws from its own ChaCha stream, so the result is the same for
/// any thread count.
pub fn perturbation_stability(
    f: &Isometry,
    delta: f64,
    trials: usize,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<StabilityReport> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    match classify_isometry(f, &cfg.tol) {
        Ok(c) if c.tag == ClassTag::Loxodromic => {}
        _ => return Err(Error::Precondition("f must be loxodromic".into())),
    }
    // ‖exp(sX) − I‖ ≤ e^s − 1 for ‖X‖ = 1.
    let scale = delta.ln_1p();
    let outcomes = par::map_range(cfg.execution, trials, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let e = random_isometry(&mut rng, f.dim_n(), scale);
        let g = Isometry::trusted(f.matrix() * e.matrix());
        match classify_isometry(&g, &cfg.tol) {
            Ok(c) => (c.tag == ClassTag::Loxodromic, false),
            Err(_) => (false, true),
        }
    });
    let loxodromic = outcomes.iter().filter(|o| o.0).count();
    let ambiguous = outcomes.iter().filter(|o| o.1).count();
    Ok(StabilityReport {
        trials,
        loxodromic,
        ambiguous,
        fraction: loxodromic as f64 / trials as f64,
    })
}
