#pragma once

// Spectrum-based suspiciousness metrics over (ef, ep, nf, np).
//
// Division by zero anywhere in a formula evaluates that quotient to 0. The
// evaluation reports whether such a guard fired so callers can tell a value
// the formula defines from one the convention supplied.
//
// Formulas (F = ef + nf, P = ep + np, N = F + P):
//   tarantula       (ef/F) / (ef/F + ep/P)
//   ochiai          ef / sqrt(F * (ef + ep))
//   ochiai2         ef*np / sqrt((ef+ep)(nf+np)(ef+np)(nf+ep))
//   op2             ef - ep / (P + 1)
//   op1             -1 if nf > 0 else np
//   dstar2, dstar3  ef^k / (ep + nf)
//   jaccard         ef / (ef + nf + ep)
//   kulczynski1     ef / (nf + ep)
//   kulczynski2     (ef/(ef+nf) + ef/(ef+ep)) / 2
//   russellrao      ef / N
//   sorensendice    2ef / (2ef + nf + ep)
//   dice            2ef / (ef + nf + ep)
//   hamann          (ef + np - nf - ep) / N
//   simplematching  (ef + np) / N
//   rogerstanimoto  (ef + np) / (ef + np + 2(nf + ep))
//   m1              (ef + np) / (nf + ep)
//   m2              ef / (ef + np + 2(nf + ep))
//   wong1           ef
//   wong2           ef - ep
//   wong3           ef - h, h = ep (ep <= 2), 2 + 0.1(ep - 2) (ep <= 10),
//                   2.8 + 0.001(ep - 10) otherwise
//   ample           |ef/F - ep/P|
//   anderberg       ef / (ef + 2(nf + ep))
//   euclid          sqrt(ef + np)
//   hamming         ef + np
//   overlap         ef / min(ef + ep, ef + nf)
//   zoltar          ef / (ef + nf + ep + 10000 nf ep / ef)
//   goodman         (2ef - nf - ep) / (2ef + nf + ep)
//   barinel         1 - ep / (ep + ef)
//   er5c            1 if ef == F else 0

#include "vfl/error.hpp"
#include "vfl/spectra.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace vfl {

enum class Metric {
  tarantula,
  ochiai,
  ochiai2,
  op2,
  op1,
  dstar2,
  dstar3,
  jaccard,
  kulczynski1,
  kulczynski2,
  russellrao,
  sorensendice,
  dice,
  hamann,
  simplematching,
  rogerstanimoto,
  m1,
  m2,
  wong1,
  wong2,
  wong3,
  ample,
  anderberg,
  euclid,
  hamming,
  overlap,
  zoltar,
  goodman,
  barinel,
  er5c,
};

struct MetricInfo {
  Metric id;
  std::string_view display;
  std::string_view key;
};

inline constexpr std::array<MetricInfo, 30> kMetrics{{
    {Metric::tarantula, "Tarantula", "tarantula"},
    {Metric::ochiai, "Ochiai", "ochiai"},
    {Metric::ochiai2, "Ochiai2", "ochiai2"},
    {Metric::op2, "Op2", "op2"},
    {Metric::op1, "Op1", "op1"},
    {Metric::dstar2, "DStar2", "dstar2"},
    {Metric::dstar3, "DStar3", "dstar3"},
    {Metric::jaccard, "Jaccard", "jaccard"},
    {Metric::kulczynski1, "Kulczynski1", "kulczynski1"},
    {Metric::kulczynski2, "Kulczynski2", "kulczynski2"},
    {Metric::russellrao, "RussellRao", "russellrao"},
    {Metric::sorensendice, "SorensenDice", "sorensendice"},
    {Metric::dice, "Dice", "dice"},
    {Metric::hamann, "Hamann", "hamann"},
    {Metric::simplematching, "SimpleMatching", "simplematching"},
    {Metric::rogerstanimoto, "RogersTanimoto", "rogerstanimoto"},
    {Metric::m1, "M1", "m1"},
    {Metric::m2, "M2", "m2"},
    {Metric::wong1, "Wong1", "wong1"},
    {Metric::wong2, "Wong2", "wong2"},
    {Metric::wong3, "Wong3", "wong3"},
    {Metric::ample, "AMPLE", "ample"},
    {Metric::anderberg, "Anderberg", "anderberg"},
    {Metric::euclid, "Euclid", "euclid"},
    {Metric::hamming, "Hamming", "hamming"},
    {Metric::overlap, "Overlap", "overlap"},
    {Metric::zoltar, "Zoltar", "zoltar"},
    {Metric::goodman, "Goodman", "goodman"},
    {Metric::barinel, "Barinel", "barinel"},
    {Metric::er5c, "ER5c", "er5c"},
}};

inline std::vector<Metric> list_metrics() {
  std::vector<Metric> out;
  for (const auto &m : kMetrics)
    out.push_back(m.id);
  return out;
}

inline const MetricInfo &metric_info(Metric m) {
  return kMetrics[static_cast<std::size_t>(m)];
}

/// Canonical lower-case name.
inline std::string_view format_metric(Metric m) { return metric_info(m).key; }

/// Case-insensitive lookup.
inline Metric parse_metric(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (const auto &m : kMetrics)
    if (m.key == lower)
      return m.id;
  throw ValidationError("unknown metric '" + std::string(name) + "'");
}

struct MetricValue {
  double value = 0.0;
  /// False when a zero-denominator guard supplied part of the value.
  bool defined = true;
};

namespace detail {
class GuardedMath {
public:
  double div(double num, double den) {
    if (den == 0.0) {
      defined_ = false;
      return 0.0;
    }
    return num / den;
  }
  bool defined() const noexcept { return defined_; }

private:
  bool defined_ = true;
};
} // namespace detail

inline MetricValue evaluate(Metric m, const SpectrumCounts &c) {
  if (c.ef < 0 || c.ep < 0 || c.nf < 0 || c.np < 0)
    throw ValidationError("spectrum counts must be non-negative");
  const double ef = static_cast<double>(c.ef), ep = static_cast<double>(c.ep),
               nf = static_cast<double>(c.nf), np = static_cast<double>(c.np);
  const double F = ef + nf, P = ep + np, N = F + P;
  detail::GuardedMath g;
  double v = 0.0;
  switch (m) {
  case Metric::tarantula: {
    const double fr = g.div(ef, F), pr = g.div(ep, P);
    v = g.div(fr, fr + pr);
    break;
  }
  case Metric::ochiai:
    v = g.div(ef, std::sqrt(F * (ef + ep)));
    break;
  case Metric::ochiai2:
    v = g.div(ef * np, std::sqrt((ef + ep) * (nf + np) * (ef + np) * (nf + ep)));
    break;
  case Metric::op2:
    v = ef - ep / (P + 1.0);
    break;
  case Metric::op1:
    v = c.nf > 0 ? -1.0 : np;
    break;
  case Metric::dstar2:
    v = g.div(ef * ef, ep + nf);
    break;
  case Metric::dstar3:
    v = g.div(ef * ef * ef, ep + nf);
    break;
  case Metric::jaccard:
    v = g.div(ef, ef + nf + ep);
    break;
  case Metric::kulczynski1:
    v = g.div(ef, nf + ep);
    break;
  case Metric::kulczynski2:
    v = 0.5 * (g.div(ef, ef + nf) + g.div(ef, ef + ep));
    break;
  case Metric::russellrao:
    v = g.div(ef, N);
    break;
  case Metric::sorensendice:
    v = g.div(2.0 * ef, 2.0 * ef + nf + ep);
    break;
  case Metric::dice:
    v = g.div(2.0 * ef, ef + nf + ep);
    break;
  case Metric::hamann:
    v = g.div(ef + np - nf - ep, N);
    break;
  case Metric::simplematching:
    v = g.div(ef + np, N);
    break;
  case Metric::rogerstanimoto:
    v = g.div(ef + np, ef + np + 2.0 * (nf + ep));
    break;
  case Metric::m1:
    v = g.div(ef + np, nf + ep);
    break;
  case Metric::m2:
    v = g.div(ef, ef + np + 2.0 * (nf + ep));
    break;
  case Metric::wong1:
    v = ef;
    break;
  case Metric::wong2:
    v = ef - ep;
    break;
  case Metric::wong3: {
    const double h = ep <= 2.0    ? ep
                     : ep <= 10.0 ? 2.0 + 0.1 * (ep - 2.0)
                                  : 2.8 + 0.001 * (ep - 10.0);
    v = ef - h;
    break;
  }
  case Metric::ample:
    v = std::abs(g.div(ef, F) - g.div(ep, P));
    break;
  case Metric::anderberg:
    v = g.div(ef, ef + 2.0 * (nf + ep));
    break;
  case Metric::euclid:
    v = std::sqrt(ef + np);
    break;
  case Metric::hamming:
    v = ef + np;
    break;
  case Metric::overlap:
    v = g.div(ef, std::min(ef + ep, ef + nf));
    break;
  case Metric::zoltar:
    v = g.div(ef, ef + nf + ep + g.div(10000.0 * nf * ep, ef));
    break;
  case Metric::goodman:
    v = g.div(2.0 * ef - nf - ep, 2.0 * ef + nf + ep);
    break;
  case Metric::barinel:
    v = 1.0 - g.div(ep, ep + ef);
    break;
  case Metric::er5c:
    v = c.ef == c.ef + c.nf ? 1.0 : 0.0;
    break;
  }
  return {v, g.defined()};
}

inline double score(Metric m, const SpectrumCounts &c) {
  return evaluate(m, c).value;
}

} // namespace vfl
