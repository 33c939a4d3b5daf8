use crate::constants::lambda;
use crate::error::{Error, Result};
use crate::model::{ComplementSpec, CountingFunction};

use super::config::ThresholdKind;

/// Counting-function target for a threshold class, checked to be
/// non-decreasing on `[3, N]`.
///
/// `AtMinus` dips below its starting value for small `n` (its derivative is
/// negative while `log n < 4` for the default slack), so it is returned with
/// the running-maximum envelope enabled.
pub fn threshold_b(kind: ThresholdKind, s: u32, limit: u64) -> Result<ComplementSpec> {
    let inv_lambda = 1.0 / lambda(s)?;
    let spec = match kind {
        ThresholdKind::Above { c } => {
            if !(c > inv_lambda) {
                return Err(Error::domain(format!(
                    "`above` needs c > {inv_lambda}, got {c}"
                )));
            }
            ComplementSpec::plain(CountingFunction::Log { c })
        }
        ThresholdKind::Below { c } => {
            if !(c > 0.0 && c < inv_lambda) {
                return Err(Error::domain(format!(
                    "`below` needs 0 < c < {inv_lambda}, got {c}"
                )));
            }
            ComplementSpec::plain(CountingFunction::Log { c })
        }
        ThresholdKind::AtPlus => ComplementSpec::plain(CountingFunction::AtPlus { inv_lambda }),
        ThresholdKind::AtMinus { slack } => ComplementSpec {
            function: CountingFunction::AtMinus { inv_lambda, slack },
            envelope: true,
        },
    };
    let values = spec.values(limit);
    if let Some(i) = values
        .windows(2)
        .enumerate()
        .skip(2)
        .find_map(|(i, w)| (w[1] < w[0]).then_some(i))
    {
        return Err(Error::domain(format!("target decreases at n = {}", i + 2)));
    }
    Ok(spec)
}
