#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gaussfold/io.hpp"
#include "gaussfold/retraction.hpp"

namespace gf = gaussfold;

namespace {

gf::Vector parse_vector(const std::string& text) {
  std::vector<double> entries;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      entries.push_back(std::stod(item));
    } catch (const std::exception&) {
      gf::fail(gf::ErrorCode::ParseError, "bad number '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  gf::Vector v(static_cast<int>(entries.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = entries[i];
  return v;
}

std::vector<gf::Vector> parse_vector_list(const std::string& text) {
  std::vector<gf::Vector> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t semi = text.find(';', pos);
    out.push_back(parse_vector(text.substr(
        pos, semi == std::string::npos ? std::string::npos : semi - pos)));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text) {
  gf::Vector v = parse_vector(text);
  return {v.data(), v.data() + v.size()};
}

void emit(const std::string& output_path, const std::string& content) {
  if (output_path.empty()) {
    std::cout << content;
  } else {
    gf::write_file(output_path, content);
  }
}

struct PipelineFlags {
  double delta = M_PI / 8.0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double root_tol = 1e-12;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  double t_floor = 1e-4;
  int max_iter = 200;
  int stages = 9;

  void attach(CLI::App* cmd) {
    cmd->add_option("--delta", delta, "Karcher convexity radius");
    cmd->add_option("--alpha", alpha,
                    "cutoff level (default 0.999*min(delta, pi/4))");
    cmd->add_option("--root-tol", root_tol, "bisection tolerance for phi");
    cmd->add_option("--rho", rho, "origin cluster radius");
    cmd->add_option("--eta", eta, "slab width around the mean's complement");
    cmd->add_option("--t-floor", t_floor, "last numeric squash parameter");
    cmd->add_option("--max-iter", max_iter, "Karcher descent iteration cap");
    cmd->add_option("--stages", stages, "number of recorded stages");
  }

  gf::RetractionConfig config() const {
    gf::RetractionConfig cfg;
    cfg.delta = delta;
    cfg.alpha = alpha;
    cfg.root_tol = root_tol;
    cfg.cluster_radius = rho;
    cfg.slab_width = eta;
    cfg.t_floor = t_floor;
    cfg.max_iter = max_iter;
    cfg.stage_count = stages;
    cfg.validate();
    return cfg;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Flattening pipeline for sampled submanifolds of the unit ball"};
  app.require_subcommand(1);

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a manifold file");
  std::string shape, direction_text, origins_text, offsets_text, center_text,
      positions_text, height_name = "sine", output;
  int n = 3, d = 1, count = 256, per_plane = 64;
  double extent = 0.5, radius = 0.5, amplitude = 0.05, frequency = 3.0;
  std::uint64_t seed = 12345;
  gen->add_option("--shape", shape, "planes | sphere | graph | points")
      ->required();
  gen->add_option("--n", n, "ambient dimension");
  gen->add_option("--d", d, "manifold dimension");
  gen->add_option("--count", count, "sample count");
  gen->add_option("--per-plane", per_plane, "samples per plane");
  gen->add_option("--extent", extent, "lattice half-width");
  gen->add_option("--direction", direction_text,
                  "plane direction, d columns 'c;c' (default axis span)");
  gen->add_option("--origins", origins_text, "plane origins 'v;v'");
  gen->add_option("--offsets", offsets_text,
                  "plane offsets along e_{d+1}, comma list");
  gen->add_option("--center", center_text, "sphere center");
  gen->add_option("--radius", radius, "sphere radius");
  gen->add_option("--height", height_name, "graph height function: sine | bowl");
  gen->add_option("--amplitude", amplitude, "graph amplitude");
  gen->add_option("--freq", frequency, "graph frequency");
  gen->add_option("--positions", positions_text, "d = 0 positions 'v;v'");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--output", output, "manifold file")->required();

  // --- flatten -----------------------------------------------------------
  auto* flatten = app.add_subcommand("flatten", "run the retraction pipeline");
  std::string flatten_input, flatten_output, flatten_format = "json";
  PipelineFlags flatten_flags;
  flatten->add_option("--input", flatten_input)->required();
  flatten->add_option("--output", flatten_output)->required();
  flatten->add_option("--format", flatten_format, "json (trace) | csv (stages)");
  flatten_flags.attach(flatten);

  // --- mean --------------------------------------------------------------
  auto* mean = app.add_subcommand("mean", "Karcher mean of the tangent planes");
  std::string mean_input, mean_output;
  double mean_delta = M_PI / 8.0;
  mean->add_option("--input", mean_input)->required();
  mean->add_option("--output", mean_output);
  mean->add_option("--delta", mean_delta, "Karcher convexity radius");

  // --- theta -------------------------------------------------------------
  auto* theta_cmd = app.add_subcommand("theta", "Gauss spread step function");
  std::string theta_input, theta_output, theta_format = "csv";
  theta_cmd->add_option("--input", theta_input)->required();
  theta_cmd->add_option("--output", theta_output);
  theta_cmd->add_option("--format", theta_format, "csv | json");

  // --- dist --------------------------------------------------------------
  auto* dist = app.add_subcommand("dist", "hyperspace distance of two manifolds");
  std::string dist_a, dist_b, dist_output;
  dist->add_option("first", dist_a, "manifold file")->required();
  dist->add_option("second", dist_b, "manifold file")->required();
  dist->add_option("--output", dist_output);

  // --- proximity ---------------------------------------------------------
  auto* prox = app.add_subcommand(
      "proximity", "directed C1 proximity of the second manifold to the first");
  std::string prox_a, prox_b, prox_output;
  double prox_radius = 1.0;
  prox->add_option("first", prox_a, "reference manifold file")->required();
  prox->add_option("second", prox_b, "probe manifold file")->required();
  prox->add_option("--radius", prox_radius, "restrict probe samples to |y| <= r");
  prox->add_option("--output", prox_output);

  // --- multiplicity ------------------------------------------------------
  auto* mult = app.add_subcommand("multiplicity",
                                  "covering sheet counts of the second "
                                  "manifold over the first");
  std::string mult_a, mult_b, mult_output, mult_format = "json";
  double mult_eps = 0.1;
  mult->add_option("first", mult_a, "base manifold file")->required();
  mult->add_option("second", mult_b, "covering manifold file")->required();
  mult->add_option("--epsilon", mult_eps, "closeness threshold")->required();
  mult->add_option("--format", mult_format, "json | csv");
  mult->add_option("--output", mult_output);

  // --- probe -------------------------------------------------------------
  auto* probe = app.add_subcommand("probe", "empirical continuity probe");
  std::string probe_input, probe_output, probe_format = "json",
              jitters_text = "0.125,0.0625,0.03125,0.015625,0.0078125,"
                             "0.00390625,0.001953125,0.0009765625";
  std::uint64_t probe_seed = 12345;
  PipelineFlags probe_flags;
  probe->add_option("--input", probe_input)->required();
  probe->add_option("--output", probe_output);
  probe->add_option("--jitters", jitters_text, "comma list of jitter sizes");
  probe->add_option("--seed", probe_seed, "RNG seed");
  probe->add_option("--format", probe_format, "json | csv");
  probe_flags.attach(probe);

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    gf::ShapeSpec spec = [&]() -> gf::ShapeSpec {
      if (shape == "planes") {
        gf::PlanesSpec planes{n, d, std::nullopt, {}, per_plane, extent};
        if (!direction_text.empty()) {
          std::vector<gf::Vector> cols = parse_vector_list(direction_text);
          gf::Matrix basis(n, static_cast<int>(cols.size()));
          for (int j = 0; j < basis.cols(); ++j) {
            if (cols[j].size() != n) {
              gf::fail(gf::ErrorCode::DimensionMismatch,
                       "direction column has the wrong length");
            }
            basis.col(j) = cols[j];
          }
          planes.direction = gf::Plane::from_basis(basis);
        }
        if (!origins_text.empty()) {
          planes.origins = parse_vector_list(origins_text);
        } else if (!offsets_text.empty()) {
          if (d >= n) {
            gf::fail(gf::ErrorCode::DimensionMismatch,
                     "--offsets needs d < n; use --origins");
          }
          for (double c : parse_number_list(offsets_text)) {
            gf::Vector origin = gf::Vector::Zero(n);
            origin[d] = c;
            planes.origins.push_back(origin);
          }
        } else {
          planes.origins.push_back(gf::Vector::Zero(n));
        }
        return planes;
      }
      if (shape == "sphere") {
        gf::Vector center = center_text.empty() ? gf::Vector::Zero(n)
                                                : parse_vector(center_text);
        return gf::SphereSpec{n, center, radius, count};
      }
      if (shape == "graph") {
        gf::HeightFunction h;
        if (height_name == "sine") {
          h = gf::HeightFunction::Sine;
        } else if (height_name == "bowl") {
          h = gf::HeightFunction::Bowl;
        } else {
          gf::fail(gf::ErrorCode::ParseError, "height must be 'sine' or 'bowl'");
        }
        return gf::GraphSpec{n, d, h, amplitude, frequency, count, extent};
      }
      if (shape == "points") {
        if (positions_text.empty()) {
          gf::fail(gf::ErrorCode::ParseError, "points needs --positions");
        }
        return gf::PointsSpec{n, parse_vector_list(positions_text)};
      }
      gf::fail(gf::ErrorCode::ParseError, "unknown shape '" + shape + "'");
    }();
    gf::write_file(output, gf::manifold_to_json(gf::generate(spec, seed)));
    return 0;
  }

  if (*flatten) {
    gf::RetractionConfig cfg = flatten_flags.config();
    gf::SampledManifold w = gf::load_manifold(flatten_input);
    gf::RetractionTrace trace = gf::retract(w, cfg);
    gf::write_file(flatten_output, flatten_format == "csv"
                                       ? gf::trace_to_csv(trace)
                                       : gf::trace_to_json(trace));
    std::cerr << "phi = " << gf::format_scalar(trace.phi_value) << ", "
              << trace.result.size() << " plane(s)\n";
    return 0;
  }

  if (*mean) {
    gf::SampledManifold w = gf::load_manifold(mean_input);
    emit(mean_output, gf::plane_to_json(gf::karcher_mean(w, mean_delta)));
    return 0;
  }

  if (*theta_cmd) {
    gf::StepFunction f = gf::theta(gf::load_manifold(theta_input));
    emit(theta_output, theta_format == "json" ? gf::step_function_to_json(f)
                                              : gf::step_function_to_csv(f));
    return 0;
  }

  if (*dist) {
    gf::SampledManifold a = gf::load_manifold(dist_a);
    gf::SampledManifold b = gf::load_manifold(dist_b);
    double value =
        gf::hyper_distance(gf::gauss_graph(a, a.domain == gf::Domain::Ball),
                           gf::gauss_graph(b, b.domain == gf::Domain::Ball));
    std::string text = gf::format_scalar(value) + "\n";
    std::cout << text;
    if (!dist_output.empty()) gf::write_file(dist_output, text);
    return 0;
  }

  if (*prox) {
    gf::SampledManifold a = gf::load_manifold(prox_a);
    gf::SampledManifold b = gf::load_manifold(prox_b);
    std::string text =
        gf::format_scalar(gf::gauss_proximity(a, b, prox_radius)) + "\n";
    std::cout << text;
    if (!prox_output.empty()) gf::write_file(prox_output, text);
    return 0;
  }

  if (*mult) {
    gf::SampledManifold a = gf::load_manifold(mult_a);
    gf::SampledManifold b = gf::load_manifold(mult_b);
    gf::CoveringReport report = gf::covering_multiplicity(a, b, mult_eps);
    emit(mult_output, mult_format == "csv" ? gf::covering_to_csv(report)
                                           : gf::covering_to_json(report));
    return 0;
  }

  if (*probe) {
    gf::RetractionConfig cfg = probe_flags.config();
    gf::SampledManifold w = gf::load_manifold(probe_input);
    gf::ProbeReport report = gf::probe_continuity(
        w, parse_number_list(jitters_text), probe_seed, cfg);
    emit(probe_output, probe_format == "csv" ? gf::probe_to_csv(report)
                                             : gf::probe_to_json(report));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gf::Error& e) {
    std::cerr << "gaussfold: " << e.what() << "\n";
    return gf::is_validation_error(e.code()) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "gaussfold: " << e.what() << "\n";
    return 3;
  }
}
