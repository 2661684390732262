// SPDX-License-Identifier: Apache-2.0
#include "rbm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "rbm/billiard_laplacian.hpp"
#include "rbm/config.hpp"
#include "rbm/core_stats.hpp"
#include "rbm/errors.hpp"
#include "rbm/gibbs_sampler.hpp"
#include "rbm/operator_spectra.hpp"
#include "rbm/spring_mass.hpp"
#include "rbm/surface_scattering.hpp"
#include "rbm/two_masses.hpp"

#ifndef RBM_VERSION
#define RBM_VERSION "0.0.0"
#endif

namespace rbm::cli {

namespace {

struct OptionDef {
  std::string key;
  std::string fallback;
  std::string help;
};

using Body = std::function<void(const RunConfig&, std::ostream&)>;

struct Command {
  std::string group;
  std::string name;
  std::vector<OptionDef> options;
  Body body;
};

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

std::string fmt(double x) { return format_double(x); }

std::size_t get_size(const RunConfig& c, const std::string& key) {
  return static_cast<std::size_t>(c.get_u64(key));
}

spectra::GridSpec grid_from(const RunConfig& c) {
  spectra::GridSpec g;
  g.n = get_size(c, "grid_n");
  g.v_max = c.get_double("v_max");
  const std::string& rule = c.raw("rule");
  if (rule == "midpoint") {
    g.rule = spectra::QuadratureRule::midpoint;
  } else if (rule == "gauss_legendre") {
    g.rule = spectra::QuadratureRule::gauss_legendre;
  } else {
    throw ArgumentError("rule must be midpoint or gauss_legendre");
  }
  return g;
}

gibbs::Ensemble ensemble_from(const RunConfig& c) {
  const std::string& e = c.raw("ensemble");
  if (e == "canonical") return gibbs::Ensemble::canonical;
  if (e == "literal") return gibbs::Ensemble::literal;
  throw ArgumentError("ensemble must be canonical or literal");
}

void write_spectrum(const spectra::SpectrumResult& s, std::ostream& out) {
  out << "index,eigenvalue\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    out << i + 1 << ',' << fmt(s.eigenvalues[i]) << '\n';
  }
}

void write_speed_chain(std::size_t steps, double v0, const std::function<double(double)>& step,
                       std::ostream& out) {
  out << "step,speed\n";
  double v = v0;
  out << 0 << ',' << fmt(v) << '\n';
  for (std::size_t i = 1; i <= steps; ++i) {
    v = step(v);
    out << i << ',' << fmt(v) << '\n';
  }
}

surface::BilliardCell cell_from(const RunConfig& c) {
  if (!c.raw("cell_file").empty()) return surface::BilliardCell::from_csv_file(c.raw("cell_file"));
  const std::string& name = c.raw("cell");
  if (name == "dumbbell") {
    return surface::dumbbell_cell(c.get_double("gamma"), static_cast<int>(c.get_u64("segments")));
  }
  if (name == "flat") return surface::BilliardCell::flat();
  if (name == "notch") return surface::BilliardCell::notch();
  throw ArgumentError("cell must be dumbbell, flat or notch (or use --cell-file)");
}

gibbs::GibbsSystemSpec gibbs_from(const RunConfig& c) {
  const std::string& system = c.raw("system");
  const double beta = c.get_double("beta");
  if (system == "spring") {
    const double l = c.get_double("l");
    return gibbs::quadratic_system(0.5 * l, c.get_double("k"), 0.0, l, beta);
  }
  if (system == "free") return gibbs::free_system(static_cast<int>(c.get_u64("dim")), beta);
  throw ArgumentError("system must be spring or free");
}

void write_states(const RunConfig& c, std::ostream& out, bool molecule) {
  const gibbs::GibbsSystemSpec spec = gibbs_from(c);
  const gibbs::Ensemble ensemble = ensemble_from(c);
  RandomStream stream = make_stream(c.get_u64("seed"));
  out << "index,energy";
  for (int i = 1; i <= spec.dim; ++i) out << ",q" << i;
  for (int i = 1; i <= spec.dim; ++i) out << ",v" << i;
  out << '\n';
  const std::size_t steps = get_size(c, "steps");
  for (std::size_t n = 0; n < steps; ++n) {
    const gibbs::WallState s = molecule
                                   ? gibbs::sample_stationary_molecule(spec, stream, ensemble)
                                   : gibbs::sample_wall_state(spec, stream, ensemble);
    out << n << ',' << fmt(s.energy);
    for (double q : s.q) out << ',' << fmt(q);
    for (double v : s.velocity) out << ',' << fmt(v);
    out << '\n';
  }
}

const std::vector<OptionDef> kTwoMassBase{{"gamma", "0.1", "mass ratio sqrt(m2/m1)"},
                                          {"sigma", "1", "wall velocity scale"}};
const std::vector<OptionDef> kGrid{{"grid_n", "200", "grid nodes"},
                                   {"v_max", "6", "truncation speed"},
                                   {"rule", "gauss_legendre", "midpoint or gauss_legendre"}};
const std::vector<OptionDef> kCell{{"cell", "dumbbell", "dumbbell, flat or notch"},
                                   {"gamma", "0.5", "dumbbell parameter"},
                                   {"cell_file", "", "CSV of z,y vertices"},
                                   {"segments", "64", "dumbbell segments per arc"}};
const std::vector<OptionDef> kGibbs{{"system", "spring", "spring or free"},
                                    {"dim", "1", "free-system dimension"},
                                    {"beta", "1", "inverse temperature"},
                                    {"k", "5", "spring constant"},
                                    {"l", "1", "region length"},
                                    {"steps", "1000", "number of states"},
                                    {"ensemble", "canonical", "canonical or literal"}};

std::vector<OptionDef> join(std::initializer_list<std::vector<OptionDef>> parts) {
  std::vector<OptionDef> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

std::vector<Command> commands() {
  std::vector<Command> cmds;

  cmds.push_back({"two-masses", "simulate",
                  join({kTwoMassBase, {{"steps", "1000", "chain length"}, {"v0", "1", "initial speed"}}}),
                  [](const RunConfig& c, std::ostream& out) {
                    const auto params = two_masses::derive_params(c.get_double("gamma"), c.get_double("sigma"));
                    const auto law = two_masses::WallLaw::gaussian(params.sigma);
                    RandomStream stream = make_stream(c.get_u64("seed"));
                    write_speed_chain(get_size(c, "steps"), c.get_double("v0"), [&](double v) {
                      return two_masses::random_map_step(v, law, stream, params);
                    }, out);
                  }});

  cmds.push_back({"two-masses", "kernel",
                  join({kTwoMassBase, {{"grid_n", "50", "grid nodes"}, {"v_max", "6", "truncation speed"},
                                       {"rule", "midpoint", "midpoint or gauss_legendre"}}}),
                  [](const RunConfig& c, std::ostream& out) {
                    const auto params = two_masses::derive_params(c.get_double("gamma"), c.get_double("sigma"));
                    const spectra::Grid grid = spectra::make_grid(grid_from(c));
                    out << "v,u,kernel\n";
                    for (double v : grid.nodes) {
                      for (double u : grid.nodes) {
                        out << fmt(v) << ',' << fmt(u) << ',' << fmt(two_masses::kernel_K(v, u, params)) << '\n';
                      }
                    }
                  }});

  cmds.push_back({"two-masses", "spectrum",
                  join({kTwoMassBase, kGrid,
                        {{"count", "10", "eigenvalues to report"},
                         {"method", "nystrom", "nystrom or mc"},
                         {"samples_per_node", "10000", "Monte Carlo samples per node"}}}),
                  [](const RunConfig& c, std::ostream& out) {
                    const double gamma = c.get_double("gamma");
                    const double sigma = c.get_double("sigma");
                    const spectra::GridSpec grid = grid_from(c);
                    spectra::DiscretizedOperator op;
                    if (c.raw("method") == "nystrom") {
                      op = spectra::two_masses_operator(gamma, sigma, grid);
                    } else if (c.raw("method") == "mc") {
                      const auto params = two_masses::derive_params(gamma, sigma);
                      const auto law = two_masses::WallLaw::gaussian(sigma);
                      op = spectra::discretize_mc(
                          [&](double v, RandomStream& s) { return two_masses::random_map_step(v, law, s, params); },
                          grid, get_size(c, "samples_per_node"), make_stream(c.get_u64("seed")),
                          [sigma](double v) { return two_masses::stationary_density(v, sigma); });
                      op = spectra::make_reversible(op);
                    } else {
                      throw ArgumentError("method must be nystrom or mc");
                    }
                    write_spectrum(spectra::spectrum(op, get_size(c, "count")), out);
                  }});

  cmds.push_back({"two-masses", "gap-scan",
                  join({{{"gammas", "0.05,0.1,0.15", "comma-separated mass ratios"},
                         {"sigma", "1", "wall velocity scale"}},
                        kGrid}),
                  [](const RunConfig& c, std::ostream& out) {
                    const double sigma = c.get_double("sigma");
                    const spectra::GridSpec grid = grid_from(c);
                    const auto scan = spectra::gap_scan(
                        [&](double g) { return spectra::two_masses_operator(g, sigma, grid); },
                        c.get_doubles("gammas"));
                    out << "gamma,gap,four_gamma_sq\n";
                    for (const auto& p : scan) {
                      out << fmt(p.gamma) << ',' << fmt(p.gap) << ',' << fmt(4.0 * p.gamma * p.gamma) << '\n';
                    }
                  }});

  cmds.push_back({"two-masses", "evolve",
                  join({kTwoMassBase, kGrid,
                        {{"checkpoints", "1,10,50,100", "steps to report"},
                         {"init_lo", "2", "initial uniform law, lower end"},
                         {"init_hi", "3", "initial uniform law, upper end"}}}),
                  [](const RunConfig& c, std::ostream& out) {
                    const auto op = spectra::two_masses_operator(c.get_double("gamma"), c.get_double("sigma"),
                                                                 grid_from(c));
                    const EmpiricalDistribution initial({c.get_double("init_lo"), c.get_double("init_hi")}, {1.0});
                    const auto checkpoints = c.get_integers("checkpoints");
                    const auto snaps = spectra::evolve_density(op, initial, checkpoints);
                    const auto stationary = spectra::stationary_distribution(op);
                    out << "step,v,density,tv\n";
                    for (std::size_t s = 0; s < snaps.size(); ++s) {
                      const double tv = tv_distance(snaps[s], stationary);
                      for (std::size_t i = 0; i < op.size(); ++i) {
                        out << checkpoints[s] << ',' << fmt(op.nodes[i]) << ',' << fmt(snaps[s].density(i))
                            << ',' << fmt(tv) << '\n';
                      }
                    }
                  }});

  cmds.push_back({"two-masses", "moments",
                  {{"gamma", "0.05", "mass ratio"}, {"sigma", "1", "wall velocity scale"},
                   {"z", "0.5,1,2", "comma-separated speeds"}, {"steps", "1000000", "samples per speed"}},
                  [](const RunConfig& c, std::ostream& out) {
                    const auto params = two_masses::derive_params(c.get_double("gamma"), c.get_double("sigma"));
                    const auto law = two_masses::WallLaw::gaussian(params.sigma);
                    const RandomStream root = make_stream(c.get_u64("seed"));
                    const auto zs = c.get_doubles("z");
                    out << "z,e1,se1,e2,se2,e3,se3\n";
                    for (std::size_t i = 0; i < zs.size(); ++i) {
                      const auto m = laplacian::scattering_moments(zs[i], params, law, get_size(c, "steps"),
                                                                   root.fork(i));
                      out << fmt(m.z) << ',' << fmt(m.e1) << ',' << fmt(m.se1) << ',' << fmt(m.e2) << ','
                          << fmt(m.se2) << ',' << fmt(m.e3) << ',' << fmt(m.se3) << '\n';
                    }
                  }});

  cmds.push_back({"spring", "simulate",
                  {{"m1", "10", "bound mass"}, {"m2", "1", "free mass"}, {"k", "5", "spring constant"},
                   {"l", "1", "region length"}, {"beta", "1", "inverse temperature"},
                   {"steps", "1000", "chain length"}, {"v0", "1", "initial speed"},
                   {"ensemble", "canonical", "canonical or literal"}},
                  [](const RunConfig& c, std::ostream& out) {
                    spring::SpringMassParams p{c.get_double("m1"), c.get_double("m2"), c.get_double("k"),
                                               c.get_double("l"), c.get_double("beta")};
                    p.validate();
                    const gibbs::Ensemble ensemble = ensemble_from(c);
                    RandomStream stream = make_stream(c.get_u64("seed"));
                    write_speed_chain(get_size(c, "steps"), c.get_double("v0"), [&](double v) {
                      return spring::spring_mass_step(v, p, stream, ensemble);
                    }, out);
                  }});

  cmds.push_back({"cell", "simulate",
                  join({kCell, {{"steps", "1000", "chain length"}, {"theta0", "0", "initial angle"}}}),
                  [](const RunConfig& c, std::ostream& out) {
                    const surface::BilliardCell cell = cell_from(c);
                    RandomStream stream = make_stream(c.get_u64("seed"));
                    double theta = c.get_double("theta0");
                    out << "step,theta\n" << 0 << ',' << fmt(theta) << '\n';
                    const std::size_t steps = get_size(c, "steps");
                    for (std::size_t i = 1; i <= steps; ++i) {
                      theta = surface::random_scatter(cell, theta, stream);
                      out << i << ',' << fmt(theta) << '\n';
                    }
                  }});

  cmds.push_back({"cell", "spectrum",
                  join({kCell, {{"grid_n", "50", "angle cells"},
                                {"samples_per_node", "20000", "Monte Carlo samples per cell"},
                                {"count", "10", "eigenvalues to report"}}}),
                  [](const RunConfig& c, std::ostream& out) {
                    const auto op = surface::estimate_cell_operator(cell_from(c), get_size(c, "grid_n"),
                                                                    get_size(c, "samples_per_node"),
                                                                    make_stream(c.get_u64("seed")));
                    write_spectrum(spectra::spectrum(op, get_size(c, "count")), out);
                  }});

  cmds.push_back({"gibbs", "sample-wall", kGibbs,
                  [](const RunConfig& c, std::ostream& out) { write_states(c, out, false); }});
  cmds.push_back({"gibbs", "sample-stationary", kGibbs,
                  [](const RunConfig& c, std::ostream& out) { write_states(c, out, true); }});
  return cmds;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random billiard wall-interaction simulations and operator spectra", "rbm"};
  app.require_subcommand(1);
  const std::vector<Command> cmds = commands();

  struct Bound {
    const Command* command;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::string seed = "0";
    std::string out_path;
    std::string config_path;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  std::map<std::string, CLI::App*> groups;
  for (const auto& cmd : cmds) {
    CLI::App*& group = groups[cmd.group];
    if (group == nullptr) {
      group = app.add_subcommand(cmd.group, cmd.group + " commands");
      group->require_subcommand(1);
    }
    auto b = std::make_unique<Bound>();
    b->command = &cmd;
    b->app = group->add_subcommand(cmd.name);
    for (const auto& opt : cmd.options) {
      b->values[opt.key] = opt.fallback;
      b->options[opt.key] = b->app->add_option(flag_name(opt.key), b->values[opt.key], opt.help);
    }
    b->app->add_option("--seed", b->seed, "random seed (unsigned 64-bit)");
    b->app->add_option("--out", b->out_path, "output path (default stdout)");
    b->app->add_option("--config", b->config_path, "key = value configuration file");
    bound.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    err << "rbm: " << e.what() << '\n';
    for (const auto& [name, group] : groups) {
      if (group->parsed() && group->get_subcommands().empty()) err << group->help();
    }
    return ExitCode::argument_error;
  }

  for (const auto& b : bound) {
    if (!b->app->parsed()) continue;
    try {
      RunConfig resolved;
      for (const auto& [key, value] : b->values) {
        if (b->options.at(key)->count() == 0) resolved.set(key, value);
      }
      resolved.set("seed", b->seed);
      if (!b->config_path.empty()) {
        const RunConfig file = RunConfig::from_file(b->config_path);
        for (const auto& [key, value] : file.values()) {
          if (b->values.count(key) || key == "seed") resolved.set(key, value);
        }
      }
      for (const auto& [key, value] : b->values) {
        if (b->options.at(key)->count() > 0) resolved.set(key, value);
      }
      if (b->app->get_option("--seed")->count() > 0) resolved.set("seed", b->seed);
      (void)resolved.get_u64("seed");

      std::ostringstream body;
      body.imbue(std::locale::classic());
      body << "# rbm " << RBM_VERSION << " command=" << b->command->group << ' ' << b->command->name
           << " seed=" << resolved.raw("seed");
      for (const auto& [key, value] : resolved.values()) {
        if (key != "seed") body << ' ' << key << '=' << value;
      }
      body << '\n';
      b->command->body(resolved, body);

      if (b->out_path.empty()) {
        out << body.str();
      } else {
        std::ofstream file(b->out_path, std::ios::binary);
        if (!file) throw ArgumentError("cannot open output file " + b->out_path);
        file << body.str();
        if (!file) throw NumericError("failed writing " + b->out_path);
      }
      return ExitCode::ok;
    } catch (const ArgumentError& e) {
      err << "rbm: argument error: " << e.what() << '\n';
      return ExitCode::argument_error;
    } catch (const std::exception& e) {
      err << "rbm: error: " << e.what() << '\n';
      return ExitCode::numeric_error;
    }
  }
  err << "rbm: no command selected\n";
  return ExitCode::argument_error;
}

}  // namespace rbm::cli
