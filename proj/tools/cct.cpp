// Command line front end: validate, generate, ext, hochschild, check, suite.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cct/instance.hpp"

using namespace cct;

namespace {

struct Options {
  std::string instance;
  int max_degree = 3;
  int nerve_cap = kDefaultNerveCap;
  std::optional<std::uint64_t> seed;
  bool json_out = false;
};

/// A file path, or a fixture name when no such file exists.
json load_document(const std::string& where) {
  if (!std::filesystem::exists(where)) {
    const auto& names = fixture_names();
    if (std::find(names.begin(), names.end(), where) != names.end() || where == "A3TW")
      return instance_to_json(fixture_instance(where, Rationals{}));
  }
  return read_json_file(where);
}

template <class K>
void apply_options(Instance<K>& in, const Options& o) {
  in.config.nerve_cap = o.nerve_cap;
  in.config.max_degree = o.max_degree;
  if (o.seed) in.config.seed = *o.seed;
}

template <class Fn>
int with_loaded(const Options& o, Fn&& fn) {
  return with_instance(load_document(o.instance), [&](auto in) {
    apply_options(in, o);
    return fn(in);
  });
}

void print_table(const std::string& label, const DimTable& t) {
  std::cout << label << ":";
  for (const auto& [i, d] : t) std::cout << " " << i << ":" << d;
  std::cout << "\n";
}

json table_json(const DimTable& t) {
  json j = json::object();
  for (const auto& [i, d] : t) j[std::to_string(i)] = d;
  return j;
}

int print_reports(const std::vector<CheckReport>& reps, bool as_json) {
  if (as_json) {
    json out = json::array();
    for (const auto& r : reps) out.push_back(report_to_json(r));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& r : reps) {
      std::cout << (r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL") << "  " << r.check << "  " << r.instance << "  "
                << r.cases.size() << " cases  " << static_cast<long>(r.millis) << " ms";
      if (!r.reason.empty()) std::cout << "  (" << r.reason << ")";
      if (const auto* f = r.first_failure()) std::cout << "  first failure: " << f->label << " " << f->detail;
      std::cout << "\n";
    }
  }
  return all_pass(reps) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ext and Hochschild comparisons for linear prestacks"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--instance", o.instance, "instance file, or a fixture name (FIX0..FIX4, A3TW)")->required();
    sub->add_option("--max-degree", o.max_degree, "highest Ext/homology degree")->capture_default_str();
    sub->add_option("--nerve-cap", o.nerve_cap, "largest nerve degree that may be built")->capture_default_str();
    sub->add_option("--seed", o.seed, "seed for the random test modules");
    sub->add_flag("--json", o.json_out, "machine-readable output");
  };

  auto* validate = app.add_subcommand("validate", "load and validate an instance");
  common(validate);

  auto* generate = app.add_subcommand("generate", "write an instance file");
  std::string what;
  std::string out_path;
  std::uint32_t p = 0;
  std::uint64_t gen_seed = 1;
  generate->add_option("what", what, "fixture name or 'random'")->required();
  generate->add_option("--seed", gen_seed, "seed for 'random'")->capture_default_str();
  generate->add_option("--p", p, "work over F_p instead of Q");
  generate->add_option("-o,--output", out_path, "output file (default stdout)");

  auto* ext = app.add_subcommand("ext", "Ext over r and over t between two test modules");
  common(ext);
  std::string lhs = "diagonal", rhs = "diagonal";
  ext->add_option("--lhs", lhs, "first module: diagonal, P<object>, random<i>")->capture_default_str();
  ext->add_option("--rhs", rhs, "second module")->capture_default_str();

  auto* hh = app.add_subcommand("hochschild", "Hochschild cohomology of the prestack a");
  common(hh);

  auto* check = app.add_subcommand("check", "run one check");
  common(check);
  std::string check_name;
  check->add_option("name", check_name, "check name")->required()->check(CLI::IsMember(check_names()));

  auto* suite = app.add_subcommand("suite", "run several checks");
  common(suite);
  std::vector<std::string> checks = check_names();
  suite->add_option("--checks", checks, "subset of checks to run")->delimiter(',')->check(CLI::IsMember(check_names()));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      return with_loaded(o, [&](const auto& in) {
        if (o.json_out) std::cout << json{{"valid", true}, {"name", in.name}}.dump() << "\n";
        else std::cout << "ok: " << in.name << "\n";
        return 0;
      });
    }
    if (*generate) {
      auto emit = [&](const auto& k) {
        std::string text = what == "random" ? serialize(random_instance(gen_seed, k)) : serialize(fixture_instance(what, k));
        if (out_path.empty()) {
          std::cout << text;
        } else {
          std::ofstream f(out_path, std::ios::binary);
          f << text;
          if (!f) throw ParseError("cannot write '" + out_path + "'");
        }
        return 0;
      };
      return p == 0 ? emit(Rationals{}) : emit(PrimeField(p));
    }
    if (*ext) {
      return with_loaded(o, [&](const auto& in) {
        auto s = in.setting();
        auto mods = r_test_modules(*s, in.config.seed, in.config.random_modules);
        auto find = [&](const std::string& label) {
          for (const auto& [l, m] : mods)
            if (l == label) return m;
          std::string known;
          for (const auto& entry : mods) known += " " + entry.first;
          throw UnknownObject("unknown test module '" + label + "'; available:" + known);
        };
        auto m = find(lhs), n = find(rhs);
        DimTable over_r = ext_dims(m, n, in.config.max_degree);
        DimTable over_t = ext_dims(pi_star(*s, m), pi_star(*s, n), in.config.max_degree);
        if (o.json_out) {
          std::cout << json{{"lhs", lhs}, {"rhs", rhs}, {"r", table_json(over_r)}, {"t", table_json(over_t)}}.dump(2) << "\n";
        } else {
          print_table("Ext over r", over_r);
          print_table("Ext over t", over_t);
        }
        return over_r == over_t ? 0 : 1;
      });
    }
    if (*hh) {
      return with_loaded(o, [&](const auto& in) {
        if (in.a != in.b) throw ValidationError("/b", "hochschild", "needs a single prestack");
        DimTable t = hochschild_dims(*in.setting(), in.config.max_degree);
        if (o.json_out) std::cout << table_json(t).dump() << "\n";
        else print_table("HH", t);
        return 0;
      });
    }
    if (*check) {
      return with_loaded(o, [&](const auto& in) { return print_reports({run_check(in, check_name, in.config.max_degree)}, o.json_out); });
    }
    if (*suite) {
      return with_loaded(o, [&](const auto& in) { return print_reports(run_suite(in, checks, in.config.max_degree), o.json_out); });
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid instance at " << e.path() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
