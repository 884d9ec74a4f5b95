#include "hfol/hfol.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "commands.hpp"
#include "hfol/error.hpp"
#include "hfol/io.hpp"

struct hfol_options {
  hfol::cmd::Options opts;
};
struct hfol_signature {
  hfol::Signature sig;
};
struct hfol_structure {
  hfol::cmd::Structure s;
};

namespace {

thread_local std::string last_error;

hfol_status status_of(hfol::ErrorKind k) {
  switch (k) {
    case hfol::ErrorKind::kUsage: return HFOL_ERR_USAGE;
    case hfol::ErrorKind::kParse: return HFOL_ERR_PARSE;
    case hfol::ErrorKind::kType: return HFOL_ERR_TYPE;
    case hfol::ErrorKind::kSizeGuard: return HFOL_ERR_SIZE_GUARD;
    case hfol::ErrorKind::kVerification: return HFOL_ERR_VERIFICATION;
    case hfol::ErrorKind::kIo: return HFOL_ERR_IO;
  }
  return HFOL_ERR_INTERNAL;
}

template <typename F>
hfol_status guard(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const hfol::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HFOL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HFOL_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) hfol::throw_usage(std::string(what) + " is null");
}

const hfol::cmd::Options& options_or_default(const hfol_options* o) {
  static const hfol::cmd::Options defaults;
  return o ? o->opts : defaults;
}

hfol_status emit(const hfol::cmd::json& report, char** out) {
  *out = dup(report.dump(2) + "\n");
  if (hfol::cmd::report_failed(report)) {
    last_error = "verification failed";
    return HFOL_ERR_VERIFICATION;
  }
  return HFOL_OK;
}

}  // namespace

extern "C" {

const char* hfol_version(void) { return "1.0.0"; }

const char* hfol_last_error(void) { return last_error.c_str(); }

const char* hfol_status_name(hfol_status s) {
  switch (s) {
    case HFOL_OK: return "ok";
    case HFOL_ERR_USAGE: return "usage error";
    case HFOL_ERR_PARSE: return "parse error";
    case HFOL_ERR_TYPE: return "type error";
    case HFOL_ERR_SIZE_GUARD: return "size guard";
    case HFOL_ERR_VERIFICATION: return "verification failure";
    case HFOL_ERR_IO: return "i/o error";
    case HFOL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void hfol_string_free(char* s) { delete[] s; }

hfol_status hfol_options_new(hfol_options** out) {
  return guard([&] {
    need(out, "out");
    *out = new hfol_options{};
    return HFOL_OK;
  });
}

void hfol_options_free(hfol_options* o) { delete o; }

hfol_status hfol_options_set_backend(hfol_options* o, const char* backend) {
  return guard([&] {
    need(o, "options");
    need(backend, "backend");
    const std::string b = backend;
    if (b != "auto" && b != "set" && b != "groupoid") {
      hfol::throw_usage("unknown backend " + b + " (expected set, groupoid or auto)");
    }
    o->opts.backend = b;
    return HFOL_OK;
  });
}

hfol_status hfol_options_set_seed(hfol_options* o, uint64_t seed) {
  return guard([&] {
    need(o, "options");
    o->opts.seed = seed;
    return HFOL_OK;
  });
}

hfol_status hfol_options_set_max_fiber(hfol_options* o, size_t max_fiber) {
  return guard([&] {
    need(o, "options");
    if (max_fiber == 0) hfol::throw_usage("the fiber bound must be positive");
    o->opts.max_fiber = max_fiber;
    return HFOL_OK;
  });
}

hfol_status hfol_signature_parse(const char* json_text, hfol_signature** out) {
  return guard([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = new hfol_signature{hfol::io::read_signature(json_text)};
    return HFOL_OK;
  });
}

hfol_status hfol_signature_of(const hfol_structure* s, hfol_signature** out) {
  return guard([&] {
    need(s, "structure");
    need(out, "out");
    *out = new hfol_signature{s->s.sig()};
    return HFOL_OK;
  });
}

void hfol_signature_free(hfol_signature* sig) { delete sig; }

hfol_status hfol_structure_parse(const char* json_text, hfol_structure** out) {
  return guard([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = new hfol_structure{hfol::cmd::load_structure(json_text)};
    return HFOL_OK;
  });
}

hfol_status hfol_structure_load(const char* path, hfol_structure** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new hfol_structure{hfol::cmd::load_structure(hfol::io::slurp(path))};
    return HFOL_OK;
  });
}

void hfol_structure_free(hfol_structure* s) { delete s; }

const char* hfol_structure_backend(const hfol_structure* s) {
  return s ? s->s.backend() : "";
}

hfol_status hfol_read_file(const char* path, char** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = dup(hfol::io::slurp(path));
    return HFOL_OK;
  });
}

hfol_status hfol_check(const hfol_signature* sig, const char* formula,
                       const char* context, char** report) {
  return guard([&] {
    need(sig, "signature");
    need(formula, "formula");
    need(report, "report");
    return emit(hfol::cmd::check(sig->sig, formula, context ? context : ""), report);
  });
}

hfol_status hfol_eval(const hfol_structure* s, const char* formula,
                      const char* context, const hfol_options* o, char** report) {
  return guard([&] {
    need(s, "structure");
    need(formula, "formula");
    need(report, "report");
    return emit(hfol::cmd::eval(s->s, formula, context ? context : "",
                                options_or_default(o)),
                report);
  });
}

hfol_status hfol_prove_check(const hfol_signature* sig, const char* proof_text,
                             const hfol_structure* s, const hfol_options* o,
                             char** report) {
  return guard([&] {
    need(sig, "signature");
    need(proof_text, "proof_text");
    need(report, "report");
    return emit(hfol::cmd::prove_check(sig->sig, proof_text, s ? &s->s : nullptr,
                                       options_or_default(o)),
                report);
  });
}

hfol_status hfol_relations(const hfol_structure* s, size_t per_family,
                           const hfol_options* o, char** report) {
  return guard([&] {
    need(report, "report");
    if (per_family == 0) hfol::throw_usage("per_family must be positive");
    return emit(hfol::cmd::relations(s ? &s->s : nullptr, per_family,
                                     options_or_default(o)),
                report);
  });
}

hfol_status hfol_invariance(const hfol_structure* m, const hfol_structure* n,
                            const char* equivalence_json,
                            const char* const* formulas, size_t n_formulas,
                            const char* context, size_t pool_size,
                            size_t pool_depth, const hfol_options* o,
                            char** report) {
  return guard([&] {
    need(m, "first structure");
    need(n, "second structure");
    need(equivalence_json, "equivalence_json");
    need(report, "report");
    if (!m->s.groupoid || !n->s.groupoid) {
      hfol::throw_usage("invariance needs two groupoid structures");
    }
    std::vector<std::string> fs;
    for (size_t i = 0; i < n_formulas; ++i) {
      need(formulas[i], "formula");
      fs.emplace_back(formulas[i]);
    }
    return emit(hfol::cmd::invariance(*m->s.groupoid, *n->s.groupoid, equivalence_json,
                                      fs, context ? context : "", pool_size, pool_depth,
                                      options_or_default(o)),
                report);
  });
}

hfol_status hfol_examples(const hfol_options* o, char** report) {
  return guard([&] {
    need(report, "report");
    return emit(hfol::cmd::examples(options_or_default(o)), report);
  });
}

hfol_status hfol_report_to_text(const char* report, char** out) {
  return guard([&] {
    need(report, "report");
    need(out, "out");
    hfol::cmd::json j;
    try {
      j = hfol::cmd::json::parse(report);
    } catch (const hfol::cmd::json::exception& e) {
      throw hfol::ParseError(std::string("invalid report: ") + e.what());
    }
    *out = dup(hfol::cmd::to_text(j));
    return HFOL_OK;
  });
}

}  // extern "C"
