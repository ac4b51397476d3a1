#include "pgdiscrim/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pgdiscrim/gallery.hpp"

namespace pgdiscrim {

using nlohmann::json;

namespace {

const json& require_field(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(path, std::string("missing field '") + key + "'");
  return *it;
}

int read_dim(const json& j, const std::string& path) {
  const json& dim = require_field(j, "dim", path);
  if (!dim.is_number_integer() || dim.get<int>() <= 0) {
    throw ParseError(path + "/dim", "expected a positive integer");
  }
  return dim.get<int>();
}

Label label_from_json(const json& j, const std::string& path) {
  if (j.is_string()) return Label(j.get<std::string>());
  if (j.is_array() && !j.empty()) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_string()) {
        throw ParseError(path + "/" + std::to_string(i), "label part must be a string");
      }
      parts.push_back(j[i].get<std::string>());
    }
    return Label::tuple(std::move(parts));
  }
  throw ParseError(path, "label must be a string or a nonempty array of strings");
}

json label_to_json(const Label& x) {
  if (x.arity() == 1) return x.part(0);
  return json(x.parts());
}

Matrix matrix_from_json(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    throw ParseError(path, "expected " + std::to_string(dim) + " matrix rows");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      throw ParseError(path + "/" + std::to_string(r),
                       "expected " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      const std::string entry_path =
          path + "/" + std::to_string(r) + "/" + std::to_string(c);
      if (entry.is_number()) {
        m(r, c) = Complex(entry.get<double>(), 0.0);
      } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() &&
                 entry[1].is_number()) {
        m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
      } else {
        throw ParseError(entry_path, "matrix entry must be a number or an [re, im] pair");
      }
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

PostInfoProblem problem_from_json(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ParseError(origin, "expected a JSON object");
  const int dim = read_dim(doc, origin);

  const json& jlabels = require_field(doc, "labels", origin);
  if (!jlabels.is_array() || jlabels.empty()) {
    throw ParseError(origin + "/labels", "expected a nonempty array");
  }
  std::vector<Label> labels;
  for (std::size_t i = 0; i < jlabels.size(); ++i) {
    labels.push_back(label_from_json(jlabels[i], origin + "/labels/" + std::to_string(i)));
  }

  std::vector<Matrix> elements;
  const bool explicit_form = doc.contains("operators");
  const bool shortcut_form = doc.contains("states");
  if (explicit_form == shortcut_form) {
    throw ParseError(origin, "exactly one of 'operators' or 'states' is required");
  }
  if (explicit_form) {
    const json& ops = doc["operators"];
    if (!ops.is_object()) throw ParseError(origin + "/operators", "expected an object");
    for (const Label& x : labels) {
      const auto it = ops.find(x.str());
      if (it == ops.end()) {
        throw ParseError(origin + "/operators", "missing operator for label '" + x.str() + "'");
      }
      elements.push_back(matrix_from_json(*it, dim, origin + "/operators/" + x.str()));
    }
  } else {
    const json& states = doc["states"];
    const json& probs = require_field(doc, "probabilities", origin);
    if (!states.is_object()) throw ParseError(origin + "/states", "expected an object");
    if (!probs.is_object()) throw ParseError(origin + "/probabilities", "expected an object");
    for (const Label& x : labels) {
      const auto st = states.find(x.str());
      if (st == states.end()) {
        throw ParseError(origin + "/states", "missing state for label '" + x.str() + "'");
      }
      const auto pr = probs.find(x.str());
      if (pr == probs.end() || !pr->is_number()) {
        throw ParseError(origin + "/probabilities",
                         "missing probability for label '" + x.str() + "'");
      }
      const double p = pr->get<double>();
      if (p < 0.0) {
        throw ParseError(origin + "/probabilities/" + x.str(), "probability is negative");
      }
      Matrix rho = matrix_from_json(*st, dim, origin + "/states/" + x.str());
      try {
        DensityOperator validated(rho);
        elements.push_back(p * validated.matrix());
      } catch (const Error& err) {
        throw ValidationError(origin + "/states/" + x.str(), err.what());
      }
    }
  }

  const json& jpartition = require_field(doc, "partition", origin);
  if (!jpartition.is_array() || jpartition.empty()) {
    throw ParseError(origin + "/partition", "expected a nonempty array of label arrays");
  }
  std::vector<std::vector<Label>> blocks;
  for (std::size_t l = 0; l < jpartition.size(); ++l) {
    const json& jblock = jpartition[l];
    const std::string block_path = origin + "/partition/" + std::to_string(l);
    if (!jblock.is_array() || jblock.empty()) {
      throw ParseError(block_path, "expected a nonempty array of labels");
    }
    std::vector<Label> block;
    for (std::size_t i = 0; i < jblock.size(); ++i) {
      block.push_back(label_from_json(jblock[i], block_path + "/" + std::to_string(i)));
    }
    blocks.push_back(std::move(block));
  }

  try {
    StateEnsemble e = StateEnsemble::make(dim, std::move(labels), std::move(elements));
    Partition p = Partition::make(e, std::move(blocks));
    return PostInfoProblem(std::move(e), std::move(p));
  } catch (const Error& err) {
    throw ValidationError(origin, err.what());
  }
}

json problem_to_json(const PostInfoProblem& prob) {
  const StateEnsemble& e = prob.ensemble();
  json doc;
  doc["dim"] = e.dim();
  json jlabels = json::array();
  json ops = json::object();
  for (std::size_t i = 0; i < e.size(); ++i) {
    jlabels.push_back(label_to_json(e.label(i)));
    ops[e.label(i).str()] = matrix_to_json(e.element(i));
  }
  doc["labels"] = std::move(jlabels);
  doc["operators"] = std::move(ops);
  json jpartition = json::array();
  for (const auto& block : prob.partition().blocks()) {
    json jblock = json::array();
    for (const Label& x : block) jblock.push_back(label_to_json(x));
    jpartition.push_back(std::move(jblock));
  }
  doc["partition"] = std::move(jpartition);
  return doc;
}

}  // namespace

PostInfoProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return problem_from_json_string(buffer.str(), path);
}

PostInfoProblem problem_from_json_string(const std::string& text,
                                         const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(origin, err.what());
  }
  return problem_from_json(doc, origin);
}

std::string problem_to_json_string(const PostInfoProblem& prob, int indent) {
  return problem_to_json(prob).dump(indent);
}

void save_problem(const PostInfoProblem& prob, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << problem_to_json_string(prob) << "\n";
}

std::string measurement_to_json_string(const Measurement& m, int indent) {
  json doc;
  doc["dim"] = m.dim();
  json outcomes = json::array();
  json effects = json::object();
  for (std::size_t i = 0; i < m.size(); ++i) {
    outcomes.push_back(label_to_json(m.outcome(i)));
    effects[m.outcome(i).str()] = matrix_to_json(m.effect(i));
  }
  doc["outcomes"] = std::move(outcomes);
  doc["effects"] = std::move(effects);
  return doc.dump(indent);
}

Measurement measurement_from_json_string(const std::string& text,
                                         const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ParseError(origin, err.what());
  }
  if (!doc.is_object()) throw ParseError(origin, "expected a JSON object");
  const int dim = read_dim(doc, origin);
  const json& joutcomes = require_field(doc, "outcomes", origin);
  if (!joutcomes.is_array() || joutcomes.empty()) {
    throw ParseError(origin + "/outcomes", "expected a nonempty array");
  }
  std::vector<Label> outcomes;
  for (std::size_t i = 0; i < joutcomes.size(); ++i) {
    outcomes.push_back(
        label_from_json(joutcomes[i], origin + "/outcomes/" + std::to_string(i)));
  }
  const json& jeffects = require_field(doc, "effects", origin);
  if (!jeffects.is_object()) throw ParseError(origin + "/effects", "expected an object");
  std::vector<Matrix> effects;
  for (const Label& x : outcomes) {
    const auto it = jeffects.find(x.str());
    if (it == jeffects.end()) {
      throw ParseError(origin + "/effects", "missing effect for outcome '" + x.str() + "'");
    }
    effects.push_back(matrix_from_json(*it, dim, origin + "/effects/" + x.str()));
  }
  try {
    return Measurement::make(dim, std::move(outcomes), std::move(effects));
  } catch (const Error& err) {
    throw ValidationError(origin, err.what());
  }
}

double parse_fraction(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw BadArgs("trailing characters in number '" + text + "'");
      return v;
    }
    const std::string num = text.substr(0, slash);
    const std::string den = text.substr(slash + 1);
    std::size_t used_num = 0;
    std::size_t used_den = 0;
    const double a = std::stod(num, &used_num);
    const double b = std::stod(den, &used_den);
    if (used_num != num.size() || used_den != den.size() || b == 0.0) {
      throw BadArgs("malformed fraction '" + text + "'");
    }
    return a / b;
  } catch (const std::invalid_argument&) {
    throw BadArgs("cannot parse number '" + text + "'");
  } catch (const std::out_of_range&) {
    throw BadArgs("number out of range '" + text + "'");
  }
}

std::vector<double> parse_weight_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) throw BadArgs("empty entry in weight list '" + text + "'");
    out.push_back(parse_fraction(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<SweepRow> sweep_figure4(double theta_min, double theta_max, int steps,
                                    const SolveOptions& opts) {
  if (!(theta_min > 0.0 && theta_min < theta_max && theta_max < std::numbers::pi)) {
    throw BadAngle("sweep range must satisfy 0 < theta_min < theta_max < pi");
  }
  if (steps < 2) throw BadArgs("sweep needs at least 2 steps");
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double theta =
        theta_min + (theta_max - theta_min) * static_cast<double>(i) / (steps - 1);
    const gallery::GalleryCase gc = gallery::two_bases(theta);
    const AuxiliaryEnsemble aux = auxiliary_ensemble(gc.problem);
    const auto closed = solve_closed_form(aux.ensemble, opts.spectral_tol);
    if (!closed) {
      throw Error("closed-form condition unexpectedly failed in the sweep");
    }
    const SolveResult numeric = solve_numeric(aux.ensemble, opts);
    SweepRow row;
    row.theta = theta;
    row.p_post_closed = aux.delta * closed->value;
    row.p_post_numeric = aux.delta * numeric.value;
    row.jmd_lower_bound = 0.5 * (1.0 + 1.0 / std::sqrt(1.0 + std::abs(std::sin(theta))));
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "theta,p_post_closed,p_post_numeric,jmd_lower_bound\n";
  char line[160];
  for (const SweepRow& row : rows) {
    std::snprintf(line, sizeof(line), "%.9f,%.9f,%.9f,%.9f\n", row.theta,
                  row.p_post_closed, row.p_post_numeric, row.jmd_lower_bound);
    out << line;
  }
}

void sweep_figure4_csv(double theta_min, double theta_max, int steps,
                       const std::string& out_path, const SolveOptions& opts) {
  const auto rows = sweep_figure4(theta_min, theta_max, steps, opts);
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  write_sweep_csv(rows, out);
  if (!out.good()) throw IoError("failed while writing '" + out_path + "'");
}

}  // namespace pgdiscrim
