"""Station-level passenger-assistance demand forecasting and workforce planning.

The package is organised around the operational pipeline:

- :mod:`assistcast.panel` turns raw assistance/booking records into a
  leakage-safe, gap-free station-hour panel with as-of booking features.
- :mod:`assistcast.gam` fits an additive decomposable model (piecewise-linear
  trend, multi-scale Fourier seasonality, holiday windows, external
  regressors) by penalized least squares.
- :mod:`assistcast.horizon` trains one model per forecast-horizon bucket and
  routes future hours to the right model by lead time.
- :mod:`assistcast.evalx` implements the evaluation metrics and the
  year-on-year baseline.
- :mod:`assistcast.workforce` converts forecasts plus a roster into hourly
  Red-Amber-Green staffing classifications with what-if support.
- :mod:`assistcast.synth` generates synthetic data with retained ground
  truth so the whole pipeline is testable without proprietary feeds.
- :mod:`assistcast.cli` / :mod:`assistcast.api` are the operational entry
  points (pipeline commands, model persistence, HTTP service).
"""

__version__ = "0.1.0"
