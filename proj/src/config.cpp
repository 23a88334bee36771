// Copyright 2026 The ngnopt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ngn/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace ngn {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw InvalidArgument(key + ": expected a number, got '" + v + "'");
  return out;
}

template <typename Int>
Int to_int(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw InvalidArgument(key + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string &key, const std::string &value) {
  const std::string v = trim(value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string &value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string &key, const std::string &value) {
  std::vector<double> out;
  for (const auto &item : split_list(value)) out.push_back(to_double(key, item));
  if (out.empty()) throw InvalidArgument(key + ": list is empty");
  return out;
}

struct Section {
  std::string name;
  std::size_t line;
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::size_t> lines;
};

std::vector<Section> parse_sections(std::string_view text, const std::string &origin) {
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw InvalidArgument(where + "malformed section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument(where + "expected key = value");
    if (sections.empty()) throw InvalidArgument(where + "entry outside of a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InvalidArgument(where + "empty key");
    sections.back().entries.emplace_back(key, trim(line.substr(eq + 1)));
    sections.back().lines.push_back(line_no);
  }
  return sections;
}

void parse_x0_range(SweepSpec &spec, const std::string &key, const std::string &value) {
  const auto v = to_doubles(key, value);
  if (v.size() != 3) throw InvalidArgument(key + ": expected lo, hi, count");
  const double count = v[2];
  if (!(count >= 1.0) || count != std::floor(count))
    throw InvalidArgument(key + ": count must be a positive integer");
  const auto n = static_cast<std::size_t>(count);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    spec.starts.push_back({v[0] + (v[1] - v[0]) * t});
  }
}

}  // namespace

void apply_problem_key(ProblemSpec &spec, const std::string &key, const std::string &value) {
  const std::string k = "problem." + key;
  if (key == "kind") {
    spec.kind = parse_problem_kind(trim(value));
  } else if (key == "dim") {
    spec.dim = to_int<std::size_t>(k, value);
  } else if (key == "rows") {
    spec.rows = to_int<std::size_t>(k, value);
  } else if (key == "r") {
    spec.ridge_r = to_double(k, value);
  } else if (key == "seed") {
    spec.seed = to_int<std::uint64_t>(k, value);
  } else if (key == "interpolating") {
    spec.interpolating = to_bool(k, value);
  } else if (key == "poly") {
    spec.poly_coeffs = to_doubles(k, value);
  } else if (key == "L") {
    spec.poly_L = to_double(k, value);
  } else if (key == "data") {
    spec.data_path = trim(value);
  } else if (key == "x0") {
    spec.x0 = to_doubles(k, value);
  } else {
    throw InvalidArgument("unknown key '" + k + "'");
  }
}

ProblemSpec parse_problem_descriptor(std::string_view text) {
  ProblemSpec spec;
  bool have_kind = false;
  std::string token;
  std::vector<std::string> tokens;
  for (char ch : text) {
    if (ch == ';' || ch == ' ' || ch == '\t' || ch == '\n') {
      if (!token.empty()) tokens.push_back(token);
      token.clear();
    } else {
      token.push_back(ch);
    }
  }
  if (!token.empty()) tokens.push_back(token);
  for (const auto &t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      // A bare word is shorthand for kind=<word>.
      spec.kind = parse_problem_kind(t);
      have_kind = true;
      continue;
    }
    const std::string key = t.substr(0, eq);
    apply_problem_key(spec, key, t.substr(eq + 1));
    if (key == "kind") have_kind = true;
  }
  if (!have_kind) throw InvalidArgument("problem descriptor: missing required key 'kind'");
  return spec;
}

SweepSpec parse_config_text(std::string_view text, const std::string &origin) {
  SweepSpec spec;
  bool have_kind = false, have_c = false, have_seeds = false, have_steps = false;
  std::set<std::string> seen_singletons;

  for (const Section &sec : parse_sections(text, origin)) {
    const std::string where = origin + ":" + std::to_string(sec.line) + ": ";
    if (sec.name != "optimizer" && !seen_singletons.insert(sec.name).second)
      throw InvalidArgument(where + "section [" + sec.name + "] appears twice");

    if (sec.name == "problem") {
      for (const auto &[key, value] : sec.entries) {
        if (key == "resample_per_seed") {
          spec.resample_problem = to_bool("problem.resample_per_seed", value);
          continue;
        }
        apply_problem_key(spec.problem, key, value);
        if (key == "kind") have_kind = true;
      }
    } else if (sec.name == "optimizer") {
      SweepOptimizer opt;
      bool opt_kind = false;
      for (const auto &[key, value] : sec.entries) {
        const std::string k = "optimizer." + key;
        if (key == "kind") {
          opt.spec.kind = parse_optimizer_kind(trim(value));
          opt_kind = true;
        } else if (key == "label") {
          opt.label = trim(value);
          if (opt.label.find(',') != std::string::npos)
            throw InvalidArgument(k + ": label must not contain commas");
        } else if (key == "c") {
          opt.c_values = to_doubles(k, value);
        } else if (key == "beta2") {
          opt.spec.beta2 = to_double(k, value);
        } else if (key == "eps") {
          opt.spec.eps = to_double(k, value);
        } else if (key == "wd") {
          opt.spec.wd_lambda = to_double(k, value);
        } else if (key == "schedule") {
          opt.spec.schedule = parse_schedule(trim(value));
        } else if (key == "K") {
          opt.spec.schedule_K = to_int<std::int64_t>(k, value);
        } else if (key == "c_coord") {
          opt.spec.c_coord = to_doubles(k, value);
        } else if (key == "ngn_d_precond") {
          opt.spec.ngn_d_precond = to_bool(k, value);
        } else if (key == "dampening") {
          opt.spec.dampening = to_double(k, value);
        } else if (key == "precond_identity") {
          opt.spec.precond_identity = to_bool(k, value);
        } else {
          throw InvalidArgument(where + "unknown key '" + k + "'");
        }
      }
      if (!opt_kind) throw InvalidArgument(where + "missing required key 'optimizer.kind'");
      if (opt.label.empty()) opt.label = std::string(to_string(opt.spec.kind));
      spec.optimizers.push_back(std::move(opt));
    } else if (sec.name == "grid") {
      for (const auto &[key, value] : sec.entries) {
        const std::string k = "grid." + key;
        if (key == "c") {
          spec.c_grid = to_doubles(k, value);
          have_c = true;
        } else if (key == "beta") {
          spec.beta_grid = to_doubles(k, value);
        } else if (key == "seeds") {
          spec.seeds.clear();
          for (const auto &s : split_list(value)) spec.seeds.push_back(to_int<std::uint64_t>(k, s));
          if (spec.seeds.empty()) throw InvalidArgument(k + ": list is empty");
          have_seeds = true;
        } else if (key == "x0_range") {
          parse_x0_range(spec, k, value);
        } else if (key == "x0_list") {
          for (double v : to_doubles(k, value)) spec.starts.push_back({v});
        } else {
          throw InvalidArgument(where + "unknown key '" + k + "'");
        }
      }
    } else if (sec.name == "budget") {
      for (const auto &[key, value] : sec.entries) {
        const std::string k = "budget." + key;
        if (key == "max_steps") {
          spec.budget.max_steps = to_int<std::int64_t>(k, value);
          have_steps = true;
        } else if (key == "success_loss") {
          spec.budget.success_loss = to_double(k, value);
        } else if (key == "diverge_loss") {
          spec.budget.diverge_loss = to_double(k, value);
        } else if (key == "batch_size") {
          spec.budget.batch_size = to_int<std::size_t>(k, value);
        } else if (key == "full_loss_every") {
          spec.budget.full_loss_every = to_int<std::int64_t>(k, value);
        } else {
          throw InvalidArgument(where + "unknown key '" + k + "'");
        }
      }
    } else if (sec.name == "output") {
      for (const auto &[key, value] : sec.entries) {
        const std::string k = "output." + key;
        if (key == "summary") {
          spec.summary_path = trim(value);
        } else if (key == "trajectories") {
          spec.trajectory_dir = trim(value);
        } else if (key == "threads") {
          spec.threads = to_int<unsigned>(k, value);
        } else {
          throw InvalidArgument(where + "unknown key '" + k + "'");
        }
      }
    } else {
      throw InvalidArgument(where + "unknown section [" + sec.name + "]");
    }
  }

  if (!have_kind) throw InvalidArgument(origin + ": missing required key 'problem.kind'");
  if (spec.optimizers.empty())
    throw InvalidArgument(origin + ": missing required section [optimizer]");
  bool every_opt_has_c = true;
  for (const auto &o : spec.optimizers) every_opt_has_c = every_opt_has_c && !o.c_values.empty();
  if (!have_c && !every_opt_has_c) throw InvalidArgument(origin + ": missing required key 'grid.c'");
  if (!have_seeds) throw InvalidArgument(origin + ": missing required key 'grid.seeds'");
  if (!have_steps) throw InvalidArgument(origin + ": missing required key 'budget.max_steps'");

  spec.validate();
  return spec;
}

SweepSpec parse_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace ngn
