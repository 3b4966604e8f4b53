"""scikit-learn style front end for the capacity planner."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .erlang import erlang_b
from .planner import PlannerConfig, analyze


class CapacityPlanner(BaseEstimator):
    """Fit the standard intensity from utilization data, then query blocking.

    Parameters mirror :class:`losscap.planner.PlannerConfig`, so
    ``get_params``/``set_params`` and ``sklearn.base.clone`` work as usual.

    After ``fit`` the estimator exposes ``report_`` (the full
    :class:`~losscap.planner.AnalysisReport`) and shortcuts ``rho_s_``,
    ``alpha_s_``, ``max_bed_reduction_``, ``effective_beds_`` and
    ``max_load_factor_``.

    Examples:
        >>> from losscap import CapacityPlanner, load_example_records
        >>> planner = CapacityPlanner().fit(load_example_records())
        >>> planner.effective_beds_
        42
    """

    def __init__(self, servers=50, threshold_multiplier=10.0, alpha_s_validity_cap=0.01,
                 k_step=0.05, i_max=None, k_max=2.0):
        self.servers = servers
        self.threshold_multiplier = threshold_multiplier
        self.alpha_s_validity_cap = alpha_s_validity_cap
        self.k_step = k_step
        self.i_max = i_max
        self.k_max = k_max

    def config(self):
        return PlannerConfig(
            servers=self.servers,
            threshold_multiplier=self.threshold_multiplier,
            alpha_s_validity_cap=self.alpha_s_validity_cap,
            k_step=self.k_step,
            i_max=self.i_max,
            k_max=self.k_max,
        )

    def fit(self, X, y=None, *, demands=None, window_months=None):
        """Run the planning analysis.

        ``X`` is a sequence of quarterly records, a
        :class:`~losscap.erlang.StandardIntensity`, or a bare ``rho_s``; in
        the latter two cases ``window_months`` is required. ``y`` is ignored.
        """
        if isinstance(X, np.generic):
            X = float(X)
        report = analyze(X, self.config(), demands=demands, window_months=window_months)
        self.report_ = report
        self.standard_ = report.standard
        self.rho_s_ = report.standard.rho_s
        self.alpha_s_ = report.standard.alpha_s
        self.alpha_s_valid_ = report.alpha_s_valid
        self.max_bed_reduction_ = report.max_bed_reduction
        self.effective_beds_ = report.effective_beds
        self.max_load_factor_ = report.max_load_factor
        return self

    def predict(self, X):
        """Blocking probability for each ``(servers, load_factor)`` row.

        A one-dimensional ``X`` is read as server counts at the standard load.
        """
        check_is_fitted(self, "rho_s_")
        arr = np.asarray(X, dtype=float)
        if arr.ndim == 1:
            arr = np.column_stack([arr, np.ones_like(arr)])
        arr = check_array(arr, ensure_min_features=2)
        if arr.shape[1] != 2:
            raise ValueError(f"expected 2 columns (servers, load_factor), got {arr.shape[1]}")
        if np.any(arr < 0):
            raise ValueError("servers and load factors must be nonnegative")
        if np.any(arr[:, 0] != np.round(arr[:, 0])):
            raise ValueError("server counts must be integers")
        return np.array([erlang_b(int(c), k * self.rho_s_) for c, k in arr])

    def bed_sweep_frame(self):
        """Bed-reduction sweep as a list of dicts, one per row."""
        check_is_fitted(self, "report_")
        from .report import bed_rows_doc

        return bed_rows_doc(self.report_.bed_sweep)

    def load_sweep_frame(self):
        check_is_fitted(self, "report_")
        from .report import load_rows_doc

        return load_rows_doc(self.report_.load_sweep)

    def __sklearn_is_fitted__(self):
        return hasattr(self, "report_")

