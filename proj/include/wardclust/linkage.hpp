#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "wardclust/core.hpp"

/// Lance-Williams coefficients and per-method dissimilarity updates.
///
/// After clusters i and j merge, the dissimilarity of the union to any other
/// cluster k is a linear combination of the pre-merge values:
///
///   d(i+j, k) = a_i*d(i,k) + a_j*d(j,k) + b*d(i,j) + c*|d(i,k) - d(j,k)|
///
/// The coefficient table follows Murtagh (1985, p. 68). Both Ward variants
/// use the same coefficients; they differ only in the scale of the values
/// the recurrence runs on (squared for ward.D, plain with an internal
/// square/sqrt for ward.D2).
namespace wardclust {

struct LWCoefficients {
  double a_i = 0.0;
  double a_j = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Coefficients for updating d(i+j, k). w_i, w_j, w_k are the cluster masses
/// (cardinalities when unit observation masses are used). Mass-independent
/// methods ignore them.
inline LWCoefficients lw_coefficients(LinkageMethod method, double w_i, double w_j,
                                      double w_k) {
  if (!(w_i > 0.0) || !(w_j > 0.0) || !(w_k > 0.0))
    throw std::invalid_argument("lw_coefficients: masses must be positive");
  switch (method) {
    case LinkageMethod::ward_d:
    case LinkageMethod::ward_d2: {
      const double s = w_i + w_j + w_k;
      return {(w_i + w_k) / s, (w_j + w_k) / s, -w_k / s, 0.0};
    }
    case LinkageMethod::single:
      return {0.5, 0.5, 0.0, -0.5};
    case LinkageMethod::complete:
      return {0.5, 0.5, 0.0, 0.5};
    case LinkageMethod::average:
      return {w_i / (w_i + w_j), w_j / (w_i + w_j), 0.0, 0.0};
    case LinkageMethod::centroid: {
      const double s = w_i + w_j;
      return {w_i / s, w_j / s, -w_i * w_j / (s * s), 0.0};
    }
    case LinkageMethod::median:
      return {0.5, 0.5, -0.25, 0.0};
  }
  throw std::invalid_argument("lw_coefficients: unknown method");
}

/// The raw recurrence; no scale handling, no sign policy.
inline double lw_update(double d_ik, double d_jk, double d_ij,
                        const LWCoefficients& co) {
  return co.a_i * d_ik + co.a_j * d_jk + co.b * d_ij +
         co.c * std::abs(d_ik - d_jk);
}

/// ward.D update on squared-scale dissimilarities:
///   ((w_i+w_k)d_ik + (w_j+w_k)d_jk - w_k d_ij) / (w_i+w_j+w_k).
/// When d_ij is the current minimum, the result is >= d_ij, which is what
/// makes the method reducible.
inline double ward_d_update(double d_ik, double d_jk, double d_ij, double w_i,
                            double w_j, double w_k) {
  const double s = w_i + w_j + w_k;
  return ((w_i + w_k) * d_ik + (w_j + w_k) * d_jk - w_k * d_ij) / s;
}

/// ward.D2 update on plain-scale dissimilarities: the square root of the
/// ward.D combination applied to the squares of the inputs. With
/// non-Euclidean input the combination can dip below zero; values within
/// -tol_scale*1e-12 are clamped to 0, anything lower is rejected.
inline double ward_d2_update(double d_ik, double d_jk, double d_ij, double w_i,
                             double w_j, double w_k) {
  double combo = ward_d_update(d_ik * d_ik, d_jk * d_jk, d_ij * d_ij, w_i, w_j, w_k);
  if (combo < 0.0) {
    const double tol_scale =
        std::max({d_ik * d_ik, d_jk * d_jk, d_ij * d_ij, 1.0});
    if (combo < -1e-12 * tol_scale)
      throw std::domain_error(
          "ward_d2_update: combination under the root is negative (" +
          std::to_string(combo) + "); input is not squared-Euclidean-compatible");
    combo = 0.0;
  }
  return std::sqrt(combo);
}

}  // namespace wardclust
