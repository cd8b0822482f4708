#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "seplam/objective.hpp"
#include "seplam/ray_certificate.hpp"

namespace seplam::oracle {

struct GridSpec {
    Complex center{0.0, 0.0};
    double half_width = 1.0;
    int points_per_axis = 401;
    int zoom_rounds = 4;
    double zoom_factor = 8.0;
    int zoom_starts = 3;  // best grid local minima refined independently
};

/// Square grid around the union of both spectra, padded by max(1, eps~) where
/// eps~ is the eigenvalue check value (an upper bound on both seps).
GridSpec default_grid(const CMatrix& a, const CMatrix& b);

struct GridMin {
    Complex z{0.0, 0.0};
    double value = 0.0;
    std::size_t evaluations = 0;
};

/// Grid search followed by zoom rounds. Points whose Lipschitz lower bound
/// from an already evaluated neighbour cannot beat the incumbent are skipped,
/// so every round returns the exact minimum over its grid.
GridMin grid_min(const CMatrix& a, const CMatrix& b, Variant variant, const GridSpec& spec);

/// Half the smallest inter-spectral gap (DEMMEL) or the gap itself (VARAH).
double normal_sep(const std::vector<Complex>& eigs_a, const std::vector<Complex>& eigs_b, Variant variant);

struct ThetaScan {
    double min_theta = 0.0;
    double min_value = 0.0;
    SearchFrame frame;  // after validation of z0
    std::vector<CertificateSample> samples;
};

/// Certificate on n_points uniform angles (lo, hi]. The search point is first
/// passed through validate_search_point with the two levels.
ThetaScan theta_scan(const CMatrix& a, const CMatrix& b, double eps1, double eps2, const SearchFrame& frame,
                     int n_points, unsigned threads = 1);

}  // namespace seplam::oracle
