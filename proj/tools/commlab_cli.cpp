// Copyright 2026 The commlab Authors
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

// commlab: command-line front end for the experiment harness.
//
// Exit codes: 0 success, 2 some "assert" entry failed, 1 config or I/O error.
// Thread count: --threads, else COMMLAB_THREADS, else 1.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commlab/error.hpp"
#include "commlab/harness/experiments.hpp"
#include "commlab/parallel.hpp"
#include "commlab/simd/kernels.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "-";
  std::string format = "json";
  std::size_t threads = 0;
  std::string isa = "auto";
  bool timestamp = false;
};

std::size_t env_threads() {
  const char* v = std::getenv("COMMLAB_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw commlab::Error("COMMLAB_THREADS must be a positive integer");
  return static_cast<std::size_t>(n);
}

void select_isa(const std::string& isa) {
  using commlab::simd::Isa;
  if (isa == "auto") return commlab::simd::set_active_isa(commlab::simd::best_isa());
  const Isa want = isa == "avx2" ? Isa::avx2 : Isa::scalar;
  if (!commlab::simd::supported(want)) throw commlab::Error("isa " + isa + " not supported here");
  commlab::simd::set_active_isa(want);
}

int run(const std::string& command, const Options& o) {
  try {
    std::size_t threads = o.threads != 0 ? o.threads : env_threads();
    commlab::set_thread_count(threads != 0 ? threads : 1);
    select_isa(o.isa);
    const commlab::harness::Json config = commlab::harness::read_config(o.config);
    commlab::harness::RunOptions ro;
    ro.timestamp = o.timestamp;
    const commlab::harness::Report report = commlab::harness::run_command(command, config, ro);
    commlab::harness::write_report(report, o.out, o.format);
    for (const auto& c : report.checks) {
      std::cerr << (c.passed ? "ok   " : "FAIL ") << c.metric << ' ' << c.op << ' ' << c.value
                << " (actual " << c.actual << ")\n";
    }
    return report.passed() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "commlab " << command << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for weighted commutator estimates"};
  app.require_subcommand(1);
  Options o;
  std::string chosen;
  for (const std::string& name : commlab::harness::command_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", o.config, "JSON scenario file")->required();
    sub->add_option("--out", o.out, "report path, - for stdout");
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--isa", o.isa, "auto, scalar or avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    sub->add_flag("--timestamp", o.timestamp, "add a UTC timestamp to the report");
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return run(chosen, o);
}
