from .classical import (
    bessel_i,
    bessel_k,
    connection_2f1,
    gauss_2f1,
    hyp_series,
    kummer_1f1,
    of1,
    tricomi_u,
)
from .series import LevelSums, MhgParams, SeriesValue, mhg, mhg_at_one_2f1
from .accel import AcceleratedSeries, accelerated_sum, fit_tail_model
