#include "gaussfold/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gaussfold {

using nlohmann::json;

namespace {

/// 1-based line of a byte offset in `text`.
int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

/// 1-based line of the k-th (0-based) occurrence of `token`, or 0.
int line_of_occurrence(const std::string& text, const std::string& token,
                       std::size_t k) {
  std::size_t pos = 0;
  for (std::size_t seen = 0;; ++seen) {
    pos = text.find(token, pos);
    if (pos == std::string::npos) return 0;
    if (seen == k) return line_of_offset(text, pos);
    pos += token.size();
  }
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, "line " +
                                    std::to_string(line_of_offset(text, e.byte)) +
                                    ": " + e.what());
  }
}

json matrix_to_columns(const Matrix& m) {
  json cols = json::array();
  for (int j = 0; j < m.cols(); ++j) {
    json col = json::array();
    for (int i = 0; i < m.rows(); ++i) col.push_back(m(i, j));
    cols.push_back(std::move(col));
  }
  return cols;
}

Matrix columns_to_matrix(const json& cols, int rows) {
  Matrix m(rows, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows) {
      fail(ErrorCode::ParseError, "frame column has the wrong length");
    }
    for (int i = 0; i < rows; ++i) m(i, j) = cols[j][i].get<double>();
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from_json(const json& a) {
  Vector v(static_cast<int>(a.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

json plane_to_json_value(const Plane& plane) {
  return json{{"n", plane.ambient_dim()},
              {"d", plane.plane_dim()},
              {"frame", matrix_to_columns(plane.frame())}};
}

Plane plane_from_json_value(const json& value) {
  const int n = value.at("n").get<int>();
  const int d = value.at("d").get<int>();
  if (n < 0 || d < 0 || d > n) {
    fail(ErrorCode::InvariantViolation, "plane needs 0 <= d <= n");
  }
  const json& cols = value.at("frame");
  if (static_cast<int>(cols.size()) != d) {
    fail(ErrorCode::ParseError, "frame must have d columns");
  }
  Matrix frame = columns_to_matrix(cols, n);
  if (d > 0) {
    Matrix gram = frame.transpose() * frame;
    double defect =
        (gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (defect > 1e-6) {
      fail(ErrorCode::InvariantViolation,
           "frame orthonormality defect " + format_scalar(defect) +
               " exceeds 1e-6");
    }
  }
  return Plane::from_basis(frame);
}

json affine_plane_to_json_value(const AffinePlane& plane) {
  return json{{"direction", plane_to_json_value(plane.direction)},
              {"origin", vector_to_json(plane.origin)}};
}

json manifold_to_json_value(const SampledManifold& w) {
  json samples = json::array();
  for (const Sample& s : w.samples) {
    samples.push_back(json{{"x", vector_to_json(s.point)},
                           {"tangent", matrix_to_columns(s.tangent.frame())},
                           {"w", s.weight}});
  }
  return json{{"n", w.ambient_dim},
              {"d", w.plane_dim},
              {"domain", w.domain == Domain::Ball ? "ball" : "euclidean"},
              {"samples", std::move(samples)}};
}

json config_to_json_value(const RetractionConfig& cfg) {
  return json{{"delta", cfg.delta},
              {"alpha", cfg.alpha},
              {"root_tol", cfg.root_tol},
              {"cluster_radius", cfg.cluster_radius},
              {"slab_width", cfg.slab_width},
              {"t_floor", cfg.t_floor},
              {"max_iter", cfg.max_iter},
              {"stage_count", cfg.stage_count}};
}

}  // namespace

std::string format_scalar(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string plane_to_json(const Plane& plane) {
  return plane_to_json_value(plane).dump(2) + "\n";
}

Plane plane_from_json(const std::string& text) {
  return plane_from_json_value(parse(text));
}

std::string manifold_to_json(const SampledManifold& w) {
  return manifold_to_json_value(w).dump(2) + "\n";
}

SampledManifold manifold_from_json(const std::string& text) {
  json value = parse(text);
  SampledManifold w;
  w.ambient_dim = value.at("n").get<int>();
  w.plane_dim = value.at("d").get<int>();
  std::string domain = value.at("domain").get<std::string>();
  if (domain == "ball") {
    w.domain = Domain::Ball;
  } else if (domain == "euclidean") {
    w.domain = Domain::Euclidean;
  } else {
    fail(ErrorCode::ParseError, "domain must be \"ball\" or \"euclidean\"");
  }
  const json& samples = value.at("samples");

  auto describe = [&](std::size_t i) {
    int line = line_of_occurrence(text, "\"x\"", i);
    std::string where = "sample " + std::to_string(i);
    if (line > 0) where += " (line " + std::to_string(line) + ")";
    return where;
  };

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const json& entry = samples[i];
    Vector x = vector_from_json(entry.at("x"));
    if (x.size() != w.ambient_dim) {
      fail(ErrorCode::InvariantViolation,
           describe(i) + ": point has length " + std::to_string(x.size()) +
               ", expected " + std::to_string(w.ambient_dim));
    }
    if (w.domain == Domain::Ball && x.norm() >= 1.0) {
      fail(ErrorCode::GeometryOutsideBall,
           describe(i) + ": |x| = " + format_scalar(x.norm()) +
               " is not inside the open unit ball");
    }
    const json& cols = entry.at("tangent");
    if (static_cast<int>(cols.size()) != w.plane_dim) {
      fail(ErrorCode::InvariantViolation,
           describe(i) + ": tangent must have d = " +
               std::to_string(w.plane_dim) + " columns");
    }
    Plane tangent = plane_from_json_value(json{
        {"n", w.ambient_dim}, {"d", w.plane_dim}, {"frame", cols}});
    double weight = entry.at("w").get<double>();
    if (!(weight > 0.0)) {
      fail(ErrorCode::InvariantViolation,
           describe(i) + ": weight must be positive");
    }
    w.samples.push_back(Sample{std::move(x), std::move(tangent), weight});
  }
  return w;
}

std::string gauss_graph_to_json(const GaussGraph& graph) {
  json points = json::array();
  for (const GaussPoint& p : graph.points) {
    points.push_back(json{{"s", vector_to_json(p.sphere_point)},
                          {"tangent", matrix_to_columns(p.plane.frame())}});
  }
  return json{{"n", graph.ambient_dim},
              {"d", graph.plane_dim},
              {"basepoint", true},
              {"points", std::move(points)}}
             .dump(2) +
         "\n";
}

GaussGraph gauss_graph_from_json(const std::string& text) {
  json value = parse(text);
  GaussGraph graph;
  graph.ambient_dim = value.at("n").get<int>();
  graph.plane_dim = value.at("d").get<int>();
  for (const json& entry : value.at("points")) {
    Vector s = vector_from_json(entry.at("s"));
    double len = s.norm();
    if (std::abs(len - 1.0) > 1e-6) {
      fail(ErrorCode::InvariantViolation,
           "sphere point norm " + format_scalar(len) + " is not 1");
    }
    s /= len;
    Plane plane = plane_from_json_value(json{{"n", graph.ambient_dim},
                                             {"d", graph.plane_dim},
                                             {"frame", entry.at("tangent")}});
    graph.points.push_back(GaussPoint{std::move(s), std::move(plane)});
  }
  graph.validate();
  return graph;
}

std::string step_function_to_json(const StepFunction& f) {
  json breakpoints = json::array(), values = json::array();
  for (double b : f.breakpoints()) breakpoints.push_back(b);
  for (double v : f.values()) values.push_back(v);
  return json{{"breakpoints", std::move(breakpoints)},
              {"values", std::move(values)}}
             .dump(2) +
         "\n";
}

std::string step_function_to_csv(const StepFunction& f) {
  std::string out = "breakpoint,value\n";
  for (std::size_t k = 0; k < f.breakpoints().size(); ++k) {
    out += format_scalar(f.breakpoints()[k]) + "," +
           format_scalar(f.values()[k]) + "\n";
  }
  return out;
}

std::string trace_to_json(const RetractionTrace& trace) {
  json stages = json::array();
  for (const RetractionStage& stage : trace.stages) {
    stages.push_back(json{{"tau", stage.tau},
                          {"gauss_diameter", stage.gauss_diam},
                          {"margin", stage.margin},
                          {"manifold", manifold_to_json_value(stage.manifold)}});
  }
  json result = json::array();
  for (const AffinePlane& plane : trace.result) {
    result.push_back(affine_plane_to_json_value(plane));
  }
  return json{{"config", config_to_json_value(trace.config)},
              {"phi", trace.phi_value},
              {"mu", trace.mean ? plane_to_json_value(*trace.mean) : json()},
              {"margin", trace.margin ? json(*trace.margin) : json()},
              {"stages", std::move(stages)},
              {"result", std::move(result)},
              {"diagnostics", trace.diagnostics}}
             .dump(2) +
         "\n";
}

std::string trace_to_csv(const RetractionTrace& trace) {
  std::string out = "tau,gauss_diameter,margin\n";
  for (const RetractionStage& stage : trace.stages) {
    out += format_scalar(stage.tau) + "," + format_scalar(stage.gauss_diam) +
           "," + format_scalar(stage.margin) + "\n";
  }
  return out;
}

std::string probe_to_json(const ProbeReport& report) {
  json levels = json::array();
  for (const ProbeLevel& level : report.levels) {
    json entry{{"jitter", level.eps}};
    entry["delta_phi"] = level.delta_phi ? json(*level.delta_phi) : json();
    entry["delta_mu"] = level.delta_mean ? json(*level.delta_mean) : json();
    entry["delta_hyper"] =
        level.delta_result ? json(*level.delta_result) : json();
    entry["error"] = level.error;
    levels.push_back(std::move(entry));
  }
  return json{{"base_phi", report.base_phi},
              {"levels", std::move(levels)},
              {"nonincreasing",
               json{{"delta_phi", report.phi_nonincreasing},
                    {"delta_mu", report.mean_nonincreasing},
                    {"delta_hyper", report.result_nonincreasing}}}}
             .dump(2) +
         "\n";
}

std::string probe_to_csv(const ProbeReport& report) {
  std::string out = "jitter,delta_phi,delta_mu,delta_hyper,error\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? format_scalar(*v) : std::string();
  };
  for (const ProbeLevel& level : report.levels) {
    out += format_scalar(level.eps) + "," + cell(level.delta_phi) + "," +
           cell(level.delta_mean) + "," + cell(level.delta_result) + "," +
           level.error + "\n";
  }
  return out;
}

std::string covering_to_json(const CoveringReport& report) {
  return json{{"counts", report.sheet_counts}, {"unmatched", report.unmatched}}
             .dump(2) +
         "\n";
}

std::string covering_to_csv(const CoveringReport& report) {
  std::string out = "index,count\n";
  for (std::size_t i = 0; i < report.sheet_counts.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(report.sheet_counts[i]) + "\n";
  }
  out += "unmatched," + std::to_string(report.unmatched) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::ParseError, "cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorCode::ParseError, "cannot write " + path);
  }
  out << content;
}

SampledManifold load_manifold(const std::string& path) {
  std::string text = read_file(path);
  try {
    return manifold_from_json(text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.message());
  }
}

}  // namespace gaussfold
