#pragma once

#include <cstdint>
#include <vector>

#include "gfrag/model.hpp"
#include "gfrag/profile.hpp"

namespace gfrag::series {

/// Controls truncation of the Poisson-weighted dilation series.
struct SeriesTruncation {
  double eps = 1e-17;         ///< bound on the neglected Poisson tail mass
  int k_max_cap = 1'000'000;  ///< hard cap on the number of terms

  void validate() const;
};

/// Pure fragmentation solution (g = 0, b = 1):
///   v(t,x) = e^{-t} sum_k u0(alpha^k x) (alpha^2 t)^k / k!
double eval_v(const InitialProfile& p, double alpha, double t, double x, const SeriesTruncation& trunc = {});

/// Same series in log coordinates, n(t,y) = e^{2y} v(t, e^y)
///   = e^{-t} sum_k n0(y + k log alpha) t^k / k!.
double eval_n(const InitialProfile& p, double alpha, double t, double y, const SeriesTruncation& trunc = {});

/// Series n(t, .) on the lattice y_j = (first_index + j) * log(alpha) / m,
/// j = 0..count-1. Initial values are sampled on the same lattice, so the
/// dilation shift is an exact index offset of k*m.
std::vector<double> eval_n_nodes(const InitialProfile& p, double alpha, int m, std::int64_t first_index,
                                 std::size_t count, double t, const SeriesTruncation& trunc = {});

/// Growth-fragmentation solution through the rescaling
/// u(t,x) = e^{-gt} v(bt, x e^{-gt}).
double eval_u(const ModelParams& params, const InitialProfile& p, double t, double x,
              const SeriesTruncation& trunc = {});

/// Same quantity summed directly in x:
/// u(t,x) = e^{-(b+g)t} sum_k u0(alpha^k x e^{-gt}) (b alpha^2 t)^k / k!.
double eval_u_direct(const ModelParams& params, const InitialProfile& p, double t, double x,
                     const SeriesTruncation& trunc = {});

/// int x^q v(t,x) dx = moment(p,q) exp(t (alpha^{1-q} - 1)).
double moment_of_v(const InitialProfile& p, double alpha, double q, double t);

struct Atom {
  int generation;  ///< number of divisions k
  double x;        ///< alpha^{-k} x0 e^{gt}
  double weight;   ///< mass carried, so that <u(t),phi> = sum weight * phi(x)
};

/// Atoms of u(t,.) for Dirac initial data, generations 0..k_max. A negative
/// k_max picks the smallest range whose neglected Poisson tail is below 1e-17.
/// Zero-weight atoms (t = 0, k > 0) are omitted.
std::vector<Atom> support_set(const InitialProfile& p, const ModelParams& params, double t, int k_max = -1);

/// Smallest K >= 0 such that P(Poisson(mean) > K) < eps, or -1 if the cap is hit.
int poisson_cutoff(double mean, double eps, int cap);

}  // namespace gfrag::series
