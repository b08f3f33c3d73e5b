#pragma once

// Program spectra: per-product test outcomes and coverage, passing/failing
// classification, and (ef, ep, nf, np) counting.

#include "vfl/core_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vfl {

enum class Outcome { pass, fail };

struct TestCase {
  std::string id;
  Outcome outcome = Outcome::pass;
  StatementSet covered;
  std::optional<StatementId> failure_point;

  bool failed() const noexcept { return outcome == Outcome::fail; }
};

struct ProductSpectra {
  Product product;
  std::vector<TestCase> tests;

  bool failing() const {
    for (const auto &t : tests)
      if (t.failed())
        return true;
    return false;
  }
};

/// Checks the per-test invariants against the product the spectra belong to.
inline void validate_spectra(const ProductSpectra &ps) {
  const auto &pid = ps.product.id.str();
  if (ps.tests.empty())
    throw ValidationError("product '" + pid + "' has no tests");
  for (const auto &t : ps.tests) {
    for (const auto &s : t.covered)
      if (!ps.product.statements.contains(s))
        throw ValidationError("test '" + t.id + "' of product '" + pid +
                              "' covers '" + s.str() +
                              "' which is not in the product");
    if (t.failure_point) {
      if (!t.failed())
        throw ValidationError("passing test '" + t.id + "' of product '" +
                              pid + "' has a failure point");
      if (!t.covered.contains(*t.failure_point))
        throw ValidationError("failure point of test '" + t.id +
                              "' is not covered by it");
    }
  }
}

struct SpectrumCounts {
  long ef = 0;
  long ep = 0;
  long nf = 0;
  long np = 0;

  SpectrumCounts &operator+=(const SpectrumCounts &o) {
    ef += o.ef;
    ep += o.ep;
    nf += o.nf;
    np += o.np;
    return *this;
  }
  friend bool operator==(const SpectrumCounts &,
                         const SpectrumCounts &) = default;
};

struct ProductPartition {
  std::vector<const ProductSpectra *> passing;
  std::vector<const ProductSpectra *> failing;
};

/// Splits products into those passing every test and those failing at least
/// one. Input order is preserved inside each side.
inline ProductPartition
classify_products(const std::vector<ProductSpectra> &all) {
  ProductPartition out;
  for (const auto &ps : all) {
    if (ps.tests.empty())
      throw ValidationError("product '" + ps.product.id.str() +
                            "' has no tests");
    (ps.failing() ? out.failing : out.passing).push_back(&ps);
  }
  return out;
}

namespace detail {
inline SpectrumCounts count_tests(const std::vector<TestCase> &tests,
                                  const StatementId &s) {
  SpectrumCounts c;
  for (const auto &t : tests) {
    const bool hit = t.covered.contains(s);
    if (t.failed())
      ++(hit ? c.ef : c.nf);
    else
      ++(hit ? c.ep : c.np);
  }
  return c;
}
} // namespace detail

/// Counts over the tests of a single product. `s` must be in the product.
inline SpectrumCounts count_spectrum(const ProductSpectra &spectra,
                                     const StatementId &s) {
  if (!spectra.product.statements.contains(s))
    throw ValidationError("statement '" + s.str() + "' is not in product '" +
                          spectra.product.id.str() + "'");
  return detail::count_tests(spectra.tests, s);
}

/// Counts over every test of every product, treating the product line as one
/// program. Tests of products lacking `s` count as not executing it.
inline SpectrumCounts
count_spectrum_global(const std::vector<ProductSpectra> &all,
                      const StatementId &s) {
  SpectrumCounts c;
  for (const auto &ps : all)
    c += detail::count_tests(ps.tests, s);
  return c;
}

/// Statements covered by at least one failed test of `spectra`.
inline StatementSet failed_coverage(const ProductSpectra &spectra) {
  StatementSet out;
  for (const auto &t : spectra.tests)
    if (t.failed())
      out.insert(t.covered.begin(), t.covered.end());
  return out;
}

} // namespace vfl
