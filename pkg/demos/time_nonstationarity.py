"""Cluster lifetime makes the time ACF depend on absolute time.

With birth-death evolution on, a cluster observed at t=4 s has had more
chances to die than one observed at t=1 s, and dead clusters drag the
correlation toward the freshly-born population average.  The curves for
later evaluation times therefore decay faster.  With evolution switched
off the model is wide-sense stationary and all four curves collapse.
"""
import numpy as np

from beamchan import EvolutionConfig, preset, time_acf

ENSEMBLE = 800
SEED = 7
LAGS = np.linspace(0.0, 0.12, 13)

cfg = preset("fig4")

print("time ACF magnitude vs lag, one column per evaluation time")
curves = {t: time_acf(cfg, lag_grid=LAGS, t=t, ensemble=ENSEMBLE, seed=SEED)
          for t in cfg.time_samples}
header = "".join(f"   t={t:g}s" for t in cfg.time_samples)
print(f"{'lag [s]':>9}" + header)
for i, lag in enumerate(LAGS):
    row = "".join(f"{curves[t].magnitude[i]:8.4f}" for t in cfg.time_samples)
    print(f"{lag:9.3f}" + row)

spread = curves[1.0].magnitude - curves[4.0].magnitude
print(f"\nmax separation between t=1 and t=4 curves: {np.max(spread):.4f}")

# frozen evolution: same seed, death rate forced to zero
frozen = cfg.with_values(evolution=EvolutionConfig(death_rate=0.0),
                         mean_clusters=cfg.mean_cluster_count)
a = time_acf(frozen, lag_grid=LAGS, t=1.0, ensemble=ENSEMBLE, seed=SEED)
b = time_acf(frozen, lag_grid=LAGS, t=4.0, ensemble=ENSEMBLE, seed=SEED)
print(f"frozen-evolution check, max |ACF(t=1) - ACF(t=4)|: "
      f"{np.max(np.abs(a.magnitude - b.magnitude)):.2e} (identical states)")
