"""Utility and group-fairness metrics for binary node classification.

All probabilities are empirical frequencies over the masked nodes. The
sensitive attribute uses the {-1, +1} encoding.
"""

from dataclasses import asdict, dataclass

import numpy as np

from ._validation import check_binary, check_mask, check_sensitive
from .exceptions import EmptyGroupError, EmptyPositiveGroupError


@dataclass(frozen=True)
class FairnessReport:
    accuracy: float
    delta_sp: float
    delta_eo: float
    counts: dict

    def to_dict(self):
        return asdict(self)

    def as_percent(self):
        """Rounded percentages, as shown in human-readable summaries."""
        return {
            "accuracy": round(100 * self.accuracy, 2),
            "delta_sp": round(100 * self.delta_sp, 2),
            "delta_eo": round(100 * self.delta_eo, 2),
        }


def _prepare(y_hat, s, mask, y=None):
    y_hat = np.asarray(y_hat)
    n = y_hat.shape[0]
    y_hat = check_binary(y_hat, n, "y_hat")
    idx = check_mask(mask, n)
    out = [y_hat[idx]]
    if s is not None:
        out.append(check_sensitive(s, n)[idx])
    if y is not None:
        out.append(check_binary(y, n, "y")[idx])
    return out


def accuracy(y_hat, y, mask=None):
    """Fraction of masked nodes predicted correctly."""
    y_hat, y = _prepare(y_hat, None, mask, y)
    return float(np.mean(y_hat == y))


def _positive_rate(y_hat, group, s_value, error):
    if not group.any():
        raise error(s_value)
    return y_hat[group].sum() / group.sum()


def statistical_parity(y_hat, s, mask=None):
    """``|P(y_hat=1 | s=-1) - P(y_hat=1 | s=+1)|``."""
    y_hat, s = _prepare(y_hat, s, mask)
    rates = [_positive_rate(y_hat, s == v, v, EmptyGroupError) for v in (-1, 1)]
    return float(abs(rates[0] - rates[1]))


def equal_opportunity(y_hat, y, s, mask=None):
    """``|P(y_hat=1 | y=1, s=-1) - P(y_hat=1 | y=1, s=+1)|``.

    Raises :class:`EmptyPositiveGroupError` when either group has no truly
    positive node in the mask; returning 0 there would report perfect
    fairness on a split that cannot measure it.
    """
    y_hat, s, y = _prepare(y_hat, s, mask, y)
    rates = [
        _positive_rate(y_hat, (s == v) & (y == 1), v, EmptyPositiveGroupError)
        for v in (-1, 1)
    ]
    return float(abs(rates[0] - rates[1]))


def fairness_report(y_hat, y, s, mask=None):
    """Accuracy, statistical parity and equal opportunity in one pass."""
    yh, sm, ym = _prepare(y_hat, s, mask, y)
    counts = {}
    for v in (-1, 1):
        g = sm == v
        counts[f"n_s{v:+d}"] = int(g.sum())
        counts[f"pos_pred_s{v:+d}"] = int(yh[g].sum())
        counts[f"pos_true_s{v:+d}"] = int(ym[g].sum())
        counts[f"tp_s{v:+d}"] = int((yh[g] & ym[g]).sum())
    return FairnessReport(
        accuracy=accuracy(y_hat, y, mask),
        delta_sp=statistical_parity(y_hat, s, mask),
        delta_eo=equal_opportunity(y_hat, y, s, mask),
        counts=counts,
    )
