#include "liouville/serialize.hpp"

#include <cmath>

#include "liouville/format.hpp"

namespace liouville {

Json real(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);
}

namespace {

Json reals(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(real(x));
  return a;
}

Json optional_real(const std::optional<double>& x) { return x ? real(*x) : Json(nullptr); }

void write(std::string& out, const Json& j, int indent, int depth) {
  auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(out, e, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      double x = j.get<double>();
      out += std::isfinite(x) ? format_real(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Conditions

Json to_json(const IntegralVerdict& v, bool include_blocks) {
  Json j;
  j["status"] = to_string(v.status);
  j["value"] = real(v.value);
  j["log_value"] = real(v.log_value);
  j["error_bound"] = real(v.error_bound);
  j["deciding_end"] = v.deciding_end;
  j["diagnostic"] = v.diagnostic;
  j["blocks"] = {{"lower", v.lower_blocks.size()}, {"upper", v.upper_blocks.size()}};
  if (include_blocks) {
    auto blocks = [](const std::vector<BlockRecord>& bs) {
      Json a = Json::array();
      for (const auto& b : bs) {
        a.push_back({{"log_lo", real(b.log_lo)},
                     {"log_hi", real(b.log_hi)},
                     {"integral", real(b.integral)},
                     {"log_integral", real(b.log_integral)},
                     {"error", real(b.error)},
                     {"partial_sum", real(b.partial_sum)},
                     {"ratio", real(b.ratio)}});
      }
      return a;
    };
    j["lower_blocks"] = blocks(v.lower_blocks);
    j["upper_blocks"] = blocks(v.upper_blocks);
  }
  return j;
}

Json to_json(const LiminfDiagnostics& d) {
  Json j;
  j["decision"] = to_string(d.decision);
  j["reason"] = d.reason;
  j["fitted_exponent"] = real(d.fitted_exponent);
  j["limit_exponent"] = real(d.limit_exponent);
  j["t_samples"] = reals(d.t_samples);
  j["G_values"] = reals(d.G_values);
  j["log_values"] = reals(d.log_values);
  return j;
}

Json to_json(const NonexistenceCheck& c) {
  Json j = to_json(c.integral);
  j["g_positive_at_zero"] = c.g_positive_at_zero ? Json(*c.g_positive_at_zero) : Json(nullptr);
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["outcome"] = to_string(v.outcome);
  Json th = Json::array();
  for (const auto& t : v.theorems) th.push_back({{"id", t.id}, {"applies", t.applies}, {"conclusion", t.conclusion}});
  j["theorems"] = th;
  j["evidence"] = {{"t211", to_json(v.tail)}, {"t221", to_json(v.liminf)}, {"t231", to_json(v.nonexistence)}};
  return j;
}

Json to_json(const AdmissibilityReport& r) {
  Json j;
  j["admissible"] = r.admissible();
  if (!r.grid.empty()) {
    j["checked_range"] = {real(r.grid.front()), real(r.grid.back())};
  } else {
    j["checked_range"] = Json::array();
  }
  j["sample_points"] = r.grid.size();
  j["nondecreasing"] = {{"pass", r.nondecreasing.pass},
                        {"witness", {optional_real(r.nondecreasing.witness_lo), optional_real(r.nondecreasing.witness_hi)}}};
  Json cw = nullptr;
  if (r.convex.witness) cw = reals({(*r.convex.witness)[0], (*r.convex.witness)[1], (*r.convex.witness)[2]});
  j["convex"] = {{"pass", r.convex.pass}, {"witness", cw}, {"worst_violation", real(r.convex.worst_violation)}};
  j["positive"] = {{"pass", r.positive_on_positive.pass}, {"witness", optional_real(r.positive_on_positive.witness)}};
  j["notes"] = r.notes;
  return j;
}

Json to_json(const GTable& t) {
  Json j;
  j["m"] = t.m;
  j["zero_end"] = to_string(t.zero_end);
  j["sup_G"] = real(t.sup_G);
  j["non_increasing"] = t.non_increasing();
  j["t"] = reals(t.t_grid);
  j["G"] = reals(t.G_values);
  Json st = Json::array();
  for (auto s : t.statuses) st.push_back(to_string(s));
  j["status"] = st;
  return j;
}

Json to_json(const DecayCurve& d) {
  Json j;
  j["r"] = reals(d.r_grid);
  j["bound"] = reals(d.bounds);
  j["log_bound"] = reals(d.log_bounds);
  j["non_increasing"] = d.non_increasing;
  j["strictly_decreasing"] = d.strictly_decreasing;
  j["reaches_epsilon"] = d.reaches_epsilon;
  j["epsilon"] = real(d.epsilon);
  return j;
}

Json to_json(const KoEquivalence& e) {
  return {{"agree", e.agree}, {"generalized", to_json(e.generalized)}, {"classical", to_json(e.classical)}};
}

// ---------------------------------------------------------------------------
// Simulator

Json profile_header(const RadialProfile& p) {
  Json j;
  j["status"] = to_string(p.status);
  j["reason"] = p.reason;
  j["n"] = p.n;
  j["m"] = p.m;
  j["points"] = p.grid.size();
  j["r_end"] = real(p.grid.empty() ? 0.0 : p.r_end());
  j["local_error"] = real(p.local_error.empty() ? 0.0 : p.local_error.back());
  if (p.status == ProfileStatus::BlowUp) {
    j["blowup_radius"] = real(p.blowup_radius);
    j["bracket"] = {real(p.bracket_lo), real(p.bracket_hi)};
  }
  return j;
}

std::string profile_csv(const RadialProfile& p) {
  std::string out = "r,u";
  for (int j = 1; j < p.half_m(); ++j) out += ",v_" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    out += format_real(p.grid[i]);
    for (const auto& col : p.cascade) out += "," + format_real(col[i]);
    out += '\n';
  }
  return out;
}

Json to_json(const CounterexampleReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["half_m"] = r.half_m;
  j["n"] = r.n;
  j["nu"] = real(r.nu);
  j["c0"] = real(r.c0);
  j["k"] = real(r.k);
  j["k_auto"] = r.k_auto;
  j["k_tried"] = reals(r.k_tried);
  j["certified_range"] = {0.0, real(r.r_overflow)};
  j["dropped_points"] = r.dropped_points;
  j["min_scaled_residual"] = real(r.min_scaled_residual);
  j["argmin_r"] = real(r.argmin_r);
  Json fd = Json::array();
  for (const auto& c : r.fd_checks) {
    fd.push_back({{"r", real(c.r)},
                  {"jet", real(c.jet_value)},
                  {"finite_difference", real(c.fd_value)},
                  {"rel_error", real(c.rel_error)},
                  {"pass", c.pass}});
  }
  j["fd_checks"] = fd;
  j["fd_pass"] = r.fd_pass;
  j["note"] = r.note;
  j["r"] = reals(r.r_grid);
  j["scaled_residual"] = reals(r.scaled_residual);
  j["residual"] = reals(r.residual);
  return j;
}

// ---------------------------------------------------------------------------
// Harness

Json to_json(const AnnulusReport& r) {
  Json j;
  j["lemma"] = "31";
  j["inputs"] = {{"r1", real(r.r1)}, {"r2", real(r.r2)}};
  j["empirical_constant"] = real(r.empirical_constant);
  j["pass"] = r.pass;
  j["witnesses"] = {{"annulus_mass", real(r.annulus_mass)}, {"source_mass", real(r.source_mass)}, {"note", r.note}};
  return j;
}

Json to_json(const DoublingTrace& t) {
  Json j;
  j["lemma"] = "33";
  j["inputs"] = {{"r", real(t.r)}};
  j["empirical_constant"] = real(t.empirical_C);
  j["pass"] = t.empirical_C > 0 && t.doubling_ok;
  j["witnesses"] = {{"r_sequence", reals(t.r_sequence)},
                    {"J_values", reals(t.J_values)},
                    {"termination", to_string(t.termination)},
                    {"branch", t.branch},
                    {"C_reciprocal", real(t.C_reciprocal)},
                    {"C_root", real(t.C_root)},
                    {"J_r", real(t.J_r)},
                    {"J_2r", real(t.J_2r)},
                    {"max_doubling_error", real(t.max_doubling_error)}};
  return j;
}

Json to_json(const ComparisonReport& r, const ComparisonCase& c) {
  Json j;
  j["lemma"] = "34";
  j["inputs"] = {{"psi", c.psi.render()},   {"gamma", c.gamma.render()}, {"theta", real(c.theta)},
                 {"alpha", real(c.alpha)},  {"nu", real(c.nu)},          {"M1", real(c.M1)},
                 {"M2", real(c.M2)}};
  j["empirical_constant"] = real(r.empirical_constant);
  j["pass"] = r.pass;
  j["witnesses"] = {{"lhs", real(r.lhs)},
                    {"rhs_core", real(r.rhs_core)},
                    {"hypothesis_margin", real(r.hypothesis_margin)},
                    {"hypothesis_witness", real(r.hypothesis_witness)}};
  return j;
}

Json to_json(const TailBoundReport& r) {
  Json j;
  j["lemma"] = "35";
  j["inputs"] = {{"r", real(r.r)}};
  j["empirical_constant"] = real(r.empirical_constant);
  j["pass"] = r.pass;
  j["witnesses"] = {{"J_r", real(r.J_r)}, {"lhs", real(r.lhs)}, {"status", to_string(r.status)}, {"note", r.note}};
  return j;
}

}  // namespace liouville
