// Copyright 2026 The oqrw authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "oqrw/oqrw.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "errors.hpp"
#include "evolution.hpp"
#include "io_json.hpp"
#include "model.hpp"
#include "qmc.hpp"
#include "reducibility.hpp"

struct oqrw_model {
  oqrw::Model impl;
};

struct oqrw_state {
  oqrw::BlockState impl;
};

struct oqrw_trajectory {
  oqrw::Trajectory impl;
};

namespace {

thread_local std::string g_last_error = "no error";

oqrw_status status_of(const oqrw::Error& e) {
  switch (e.code()) {
    case oqrw::Errc::Parse:
    case oqrw::Errc::Schema:
      return OQRW_ERROR_PARSE;
    case oqrw::Errc::Inconsistent:
      return OQRW_ERROR_INTERNAL;
    default:
      return OQRW_ERROR_VALIDATION;
  }
}

// Runs the body, converting exceptions to statuses and recording the
// message for oqrw_last_error.
template <typename Fn>
oqrw_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const oqrw::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OQRW_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OQRW_ERROR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

oqrw_status require_arg(bool ok, const char* what) {
  if (!ok) {
    g_last_error = std::string("null argument: ") + what;
    return OQRW_ERROR_VALIDATION;
  }
  return OQRW_OK;
}

}  // namespace

extern "C" {

const char* oqrw_last_error(void) { return g_last_error.c_str(); }

void oqrw_string_free(char* s) { std::free(s); }

const char* oqrw_version(void) { return "oqrw 1.0.0"; }

oqrw_status oqrw_model_from_json(const char* text, oqrw_model** out) {
  if (auto bad = require_arg(text && out, "oqrw_model_from_json")) return bad;
  *out = nullptr;
  return guarded([&] {
    auto* m = new oqrw_model{oqrw::load_model_json(text)};
    *out = m;
    return OQRW_OK;
  });
}

oqrw_status oqrw_model_from_file(const char* path, oqrw_model** out) {
  if (auto bad = require_arg(path && out, "oqrw_model_from_file")) return bad;
  *out = nullptr;
  return guarded([&] {
    auto* m = new oqrw_model{oqrw::load_model_file(path)};
    *out = m;
    return OQRW_OK;
  });
}

void oqrw_model_free(oqrw_model* m) { delete m; }

oqrw_status oqrw_model_hdim(const oqrw_model* m, int* out) {
  if (auto bad = require_arg(m && out, "oqrw_model_hdim")) return bad;
  *out = m->impl.hdim();
  return OQRW_OK;
}

oqrw_status oqrw_model_site_count(const oqrw_model* m, int* out) {
  if (auto bad = require_arg(m && out, "oqrw_model_site_count")) return bad;
  *out = m->impl.site_count();
  return OQRW_OK;
}

oqrw_status oqrw_model_validate(const oqrw_model* m, double tol,
                                int* valid_out, char** report_json_out) {
  if (auto bad = require_arg(m && valid_out, "oqrw_model_validate")) return bad;
  *valid_out = 0;
  if (report_json_out) *report_json_out = nullptr;
  return guarded([&] {
    oqrw::ValidationReport report =
        m->impl.validate(tol > 0 ? tol : oqrw::kDefaultTol);
    *valid_out = report.valid ? 1 : 0;
    if (report_json_out) {
      *report_json_out = dup_string(oqrw::validation_to_json(report));
    }
    return OQRW_OK;
  });
}

oqrw_status oqrw_state_from_json(const char* text, oqrw_state** out) {
  if (auto bad = require_arg(text && out, "oqrw_state_from_json")) return bad;
  *out = nullptr;
  return guarded([&] {
    auto* s = new oqrw_state{oqrw::load_state_json(text)};
    *out = s;
    return OQRW_OK;
  });
}

oqrw_status oqrw_state_from_file(const char* path, oqrw_state** out) {
  if (auto bad = require_arg(path && out, "oqrw_state_from_file")) return bad;
  *out = nullptr;
  return guarded([&] {
    auto* s = new oqrw_state{oqrw::load_state_file(path)};
    *out = s;
    return OQRW_OK;
  });
}

oqrw_status oqrw_state_to_json(const oqrw_state* s, char** out) {
  if (auto bad = require_arg(s && out, "oqrw_state_to_json")) return bad;
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(oqrw::state_to_json(s->impl));
    return OQRW_OK;
  });
}

void oqrw_state_free(oqrw_state* s) { delete s; }

oqrw_status oqrw_trajectory_run(const oqrw_model* m, const oqrw_state* rho0,
                                int steps, oqrw_trajectory** out) {
  if (auto bad = require_arg(m && rho0 && out, "oqrw_trajectory_run")) {
    return bad;
  }
  *out = nullptr;
  return guarded([&] {
    auto* t =
        new oqrw_trajectory{oqrw::trajectory(m->impl, rho0->impl, steps)};
    *out = t;
    return OQRW_OK;
  });
}

void oqrw_trajectory_free(oqrw_trajectory* t) { delete t; }

oqrw_status oqrw_trajectory_depth(const oqrw_trajectory* t, int* out) {
  if (auto bad = require_arg(t && out, "oqrw_trajectory_depth")) return bad;
  *out = t->impl.depth();
  return OQRW_OK;
}

oqrw_status oqrw_trajectory_distribution_csv(const oqrw_trajectory* t,
                                             char** out) {
  if (auto bad = require_arg(t && out, "oqrw_trajectory_distribution_csv")) {
    return bad;
  }
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(oqrw::distribution_csv(t->impl));
    return OQRW_OK;
  });
}

oqrw_status oqrw_trajectory_state(const oqrw_trajectory* t, int step,
                                  oqrw_state** out) {
  if (auto bad = require_arg(t && out, "oqrw_trajectory_state")) return bad;
  *out = nullptr;
  return guarded([&] {
    auto* s = new oqrw_state{t->impl.state(step)};
    *out = s;
    return OQRW_OK;
  });
}

oqrw_status oqrw_invariant_state(const oqrw_model* m, double tol,
                                 int* found_out, char** report_json_out) {
  if (auto bad = require_arg(m && found_out, "oqrw_invariant_state")) {
    return bad;
  }
  *found_out = 0;
  if (report_json_out) *report_json_out = nullptr;
  return guarded([&] {
    oqrw::InvariantInfo info;
    auto omega = oqrw::invariant_state(
        m->impl, tol > 0 ? tol : oqrw::kDefaultTol, 20000, &info);
    *found_out = omega ? 1 : 0;
    if (report_json_out) {
      *report_json_out = dup_string(
          oqrw::invariant_to_json(info, omega ? &*omega : nullptr));
    }
    return OQRW_OK;
  });
}

oqrw_status oqrw_qmc_evaluate(const oqrw_trajectory* t,
                              const char* cylinder_json, int horizon,
                              double tol, double* re_out, double* im_out,
                              char** report_json_out) {
  if (auto bad = require_arg(t && cylinder_json && re_out && im_out,
                             "oqrw_qmc_evaluate")) {
    return bad;
  }
  *re_out = 0.0;
  *im_out = 0.0;
  if (report_json_out) *report_json_out = nullptr;
  return guarded([&] {
    const double use_tol = tol > 0 ? tol : oqrw::kDefaultTol;
    const int use_horizon = horizon >= 0 ? horizon : oqrw::kDefaultHorizon;
    oqrw::CylinderObservable a = oqrw::load_cylinder_json(cylinder_json);
    oqrw::QmcValue v = oqrw::qmc_evaluate(t->impl, a, use_horizon, use_tol);
    *re_out = v.value.real();
    *im_out = v.value.imag();
    if (report_json_out) {
      oqrw::MarkovPairReport pair = oqrw::verify_markov_pair(
          t->impl, a.top_level(), use_horizon, use_tol);
      *report_json_out = dup_string(oqrw::qmc_report_json(v, pair));
    }
    return OQRW_OK;
  });
}

oqrw_status oqrw_analyze(const oqrw_model* m, const oqrw_state* rho0,
                         int depth, int n0, int horizon, double tol,
                         uint64_t seed, char** report_json_out) {
  if (auto bad = require_arg(m && rho0, "oqrw_analyze")) return bad;
  if (report_json_out) *report_json_out = nullptr;
  return guarded([&] {
    oqrw::AnalyzeOptions opts;
    if (n0 >= 0) opts.n0 = n0;
    if (horizon >= 0) opts.horizon = horizon;
    if (tol > 0) opts.tol = tol;
    opts.seed = seed;
    oqrw::Analysis a = oqrw::analyze(m->impl, rho0->impl, depth, opts);
    if (report_json_out) {
      *report_json_out = dup_string(oqrw::analysis_to_json(a));
    }
    if (!a.consistent) {
      g_last_error =
          "criteria disagreed: " +
          (a.conflicts.empty() ? std::string("unknown conflict")
                               : a.conflicts.front());
      return OQRW_ERROR_INTERNAL;
    }
    return OQRW_OK;
  });
}

oqrw_status oqrw_classical_classes(const oqrw_model* m,
                                   char** report_json_out) {
  if (auto bad =
          require_arg(m && report_json_out, "oqrw_classical_classes")) {
    return bad;
  }
  *report_json_out = nullptr;
  return guarded([&] {
    oqrw::ClassicalClasses c =
        oqrw::classical_classes(m->impl.stochastic());
    *report_json_out = dup_string(oqrw::classes_to_json(c));
    return OQRW_OK;
  });
}

}  // extern "C"
