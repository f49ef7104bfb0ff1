#include "serialize.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace qcorr::cli {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

Json to_json(const Bloch& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  Json out;
  out["real"] = std::move(re);
  out["imag"] = std::move(im);
  return out;
}

Json to_json(const Eigen::Matrix4d& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < 4; ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < 4; ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const JointDistribution& dist) {
  Json table = Json::array();
  for (std::size_t i = 0; i < dist.n(); ++i) {
    Json row_i = Json::array();
    for (std::size_t j = 0; j < dist.n(); ++j) {
      Json block = Json::array();
      for (int a = 0; a < 2; ++a) block.push_back(Json::array({dist(a, 0, i, j), dist(a, 1, i, j)}));
      row_i.push_back(std::move(block));
    }
    table.push_back(std::move(row_i));
  }
  Json out;
  out["n"] = dist.n();
  out["index_order"] = "table[i][j][a][b] = P(a,b|i,j)";
  out["table"] = std::move(table);
  return out;
}

Json to_json(const BoundReport& report) {
  Json out;
  out["bound"] = report.bound;
  out["effective_bound"] = report.effective_bound();
  out["method"] = std::string(to_string(report.method));
  out["analytic"] = report.analytic ? Json(*report.analytic) : Json(nullptr);
  out["published"] = report.published ? Json(*report.published) : Json(nullptr);
  out["note"] = report.note;
  out["evaluations"] = report.evaluations;
  if (report.method == BoundMethod::Enumeration) {
    out["optimal_count"] = report.optimal_count;
    if (report.strategy) {
      out["strategy"] = {{"alice_outputs", report.strategy->alice_outputs},
                         {"bob_outputs", report.strategy->bob_outputs}};
    }
  }
  Json alice = Json::array();
  for (const Bloch& v : report.alice) alice.push_back(to_json(v));
  Json bob = Json::array();
  for (const Bloch& v : report.bob) bob.push_back(to_json(v));
  out["alice"] = std::move(alice);
  out["bob"] = std::move(bob);
  if (report.method == BoundMethod::Seesaw) {
    out["start_values"] = report.start_values;
    out["converged"] = report.converged;
  }
  return out;
}

Json to_json(const WitnessResult& result) {
  Json out;
  out["kind"] = std::string(to_string(result.kind));
  out["n"] = result.n;
  out["value"] = result.value;
  out["bound"] = result.bound;
  out["violated"] = result.violated;
  out["normalized"] = result.normalized;
  out["entropy"] = result.entropy;
  out["algebraic_max"] = result.algebraic_max;
  return out;
}

Json to_json(const SettingPair& settings) {
  Json alice = Json::array();
  for (const auto& o : settings.alice()) alice.push_back(to_json(o.bloch()));
  Json bob = Json::array();
  for (const auto& o : settings.bob()) bob.push_back(to_json(o.bloch()));
  Json out;
  out["alice"] = std::move(alice);
  out["bob"] = std::move(bob);
  return out;
}

Json to_json(const MixtureWeights& w) {
  Json out;
  out["alpha"] = w.alpha;
  out["beta"] = w.beta;
  out["gamma"] = w.gamma;
  out["delta"] = w.delta;
  out["conjugations"] = {{"alpha", "sigma_y"}, {"beta", "sigma_x"}, {"gamma", "identity"},
                         {"delta", "sigma_z"}};
  out["normalized"] = w.normalized;
  return out;
}

Json to_json(const Reconstruction& r) {
  Json out;
  out["pauli_expectations"] = to_json(r.pauli_expectations);
  out["rho_linear"] = to_json(r.rho_linear);
  out["rho_physical"] = to_json(r.rho_physical.matrix());
  return out;
}

}  // namespace qcorr::cli
