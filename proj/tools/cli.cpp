// Copyright tisim contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>
#include <vector>

#include "tisim/errors.hpp"
#include "tisim/metrics.hpp"
#include "tisim/pattern.hpp"
#include "tisim/simulation.hpp"
#include "tisim/topology.hpp"
#include "tisim/trace.hpp"

namespace tisim::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_artifact(const std::string& path, std::string_view data, std::ostream& out) {
  if (path.empty() || path == "-") {
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write " + path);
  f.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!f) throw Error("cannot write " + path);
}

Topology load(const RunOptions& opt) {
  Topology t = load_topology(opt.config);
  if (opt.seed) t.seed = *opt.seed;
  if (opt.max_cycles) t.max_cycles = *opt.max_cycles;
  validate_topology(t);
  return t;
}

struct Traced {
  MetricsRecord record;
  bool limit_hit = false;
};

Traced run_traced(const Topology& t, TraceSink* sink, const std::string& scenario) {
  Simulation sim(t);
  if (sink) sim.set_trace(sink);
  try {
    return {sim.run(t.max_cycles, scenario), false};
  } catch (const CycleLimitExceeded& e) {
    return {e.partial().front(), true};
  }
}

// Shared body of run and trace; `body` returns the exit code.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "tisim: config error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "tisim: " << e.what() << "\n";
  }
  return kExitInput;
}

}  // namespace

int cmd_compile(const CompileOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<Descriptor> ds;
    try {
      ds = lower(parse_pattern(read_text(opt.input)));
    } catch (const SyntaxError& e) {
      err << "tisim: " << opt.input << ":" << e.line() << ": " << e.what() << "\n";
      return static_cast<int>(kExitInput);
    } catch (const RangeError& e) {
      err << "tisim: " << opt.input << ":" << e.line() << ": " << e.what() << "\n";
      return static_cast<int>(kExitInput);
    }
    std::string data;
    if (opt.format == "bin") {
      const auto img = to_image(ds);
      data.assign(img.begin(), img.end());
    } else if (opt.format == "hex") {
      data = to_hex_listing(ds);
    } else {
      data = to_apb_csv(emit_apb_sequence(ds, {.pipelined = true}));
    }
    write_artifact(opt.out, data, out);
    err << "compiled " << ds.size() << (ds.size() == 1 ? " descriptor" : " descriptors") << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Topology t = load(opt);
    RecordingSink sink;
    std::vector<MetricsRecord> records;
    bool limit_hit = false;
    if (opt.pair) {
      try {
        const PairResult r = run_pair(t);
        records = {r.baseline, r.contended};
      } catch (const CycleLimitExceeded& e) {
        records = e.partial();
        limit_hit = true;
      }
      // The contended half is deterministic, so it is re-run for its trace.
      if (!opt.trace.empty()) run_traced(t, &sink, "contended");
    } else {
      Traced r = run_traced(t, opt.trace.empty() ? nullptr : &sink, "run");
      records = {std::move(r.record)};
      limit_hit = r.limit_hit;
    }
    write_artifact(opt.out, emit_csv(records), out);
    if (!opt.trace.empty()) write_artifact(opt.trace, sink.bus_csv(), out);
    if (limit_hit) {
      err << "tisim: cycle limit of " << t.max_cycles
          << " reached; partial metrics written\n";
      return static_cast<int>(kExitLimit);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_trace(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Topology t = load(opt);
    RecordingSink sink;
    const Traced r = run_traced(t, &sink, "run");
    write_artifact(opt.out, sink.bus_csv(), out);
    if (r.limit_hit) {
      err << "tisim: cycle limit of " << t.max_cycles << " reached; trace is partial\n";
      return static_cast<int>(kExitLimit);
    }
    return static_cast<int>(kExitOk);
  });
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Traffic injection and bus interference simulator", "tisim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tisim 0.1.0");

  CompileOptions copt;
  auto* compile = app.add_subcommand("compile", "Compile a traffic pattern to descriptors");
  compile->add_option("pattern", copt.input, "Pattern source (.tig)")->required();
  compile->add_option("--format", copt.format, "bin, hex or apb")
      ->check(CLI::IsMember({"bin", "hex", "apb"}))
      ->capture_default_str();
  compile->add_option("-o,--out", copt.out, "Output file (default stdout)");

  RunOptions ropt;
  auto* run = app.add_subcommand("run", "Simulate a topology and write metrics CSV");
  run->add_option("config", ropt.config, "Topology file")->required();
  run->add_option("-o,--out", ropt.out, "Metrics CSV file (default stdout)");
  run->add_option("--max-cycles", ropt.max_cycles, "Override the cycle limit")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", ropt.seed, "Override the topology seed");
  run->add_flag("--pair", ropt.pair, "Run baseline and contended scenarios");
  run->add_option("--trace", ropt.trace, "Also write the bus event trace CSV here");

  RunOptions topt;
  auto* trace = app.add_subcommand("trace", "Simulate a topology and write the bus event trace");
  trace->add_option("config", topt.config, "Topology file")->required();
  trace->add_option("-o,--out", topt.out, "Trace CSV file (default stdout)");
  trace->add_option("--max-cycles", topt.max_cycles, "Override the cycle limit")
      ->check(CLI::PositiveNumber);
  trace->add_option("--seed", topt.seed, "Override the topology seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  if (compile->parsed()) return cmd_compile(copt, out, err);
  if (run->parsed()) return cmd_run(ropt, out, err);
  return cmd_trace(topt, out, err);
}

}  // namespace tisim::cli
