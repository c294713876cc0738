#include "rotdisc/json_io.hpp"

namespace rotdisc {

using nlohmann::json;

json digits_to_json(const DigitSequence& digits) {
  json arr = json::array();
  for (const auto& d : digits.digits()) arr.push_back(d.str());
  return arr;
}

DigitSequence digits_from_json(const json& j, StructureTag tag) {
  if (!j.is_array()) throw CfError("digits must be a JSON array of decimal strings");
  std::vector<BigInt> out;
  for (const auto& item : j) {
    if (item.is_string()) {
      out.emplace_back(item.get<std::string>());
    } else if (item.is_number_integer()) {
      out.emplace_back(item.get<long long>());
    } else {
      throw CfError("digit entries must be decimal strings");
    }
  }
  return DigitSequence(std::move(out), tag);
}

json convergents_to_json(const std::vector<Convergent>& cv) {
  json arr = json::array();
  for (const auto& c : cv) {
    arr.push_back({{"j", c.index}, {"p", c.p.str()}, {"q", c.q.str()}});
  }
  return arr;
}

json qindex_report_to_json(const QIndexReport& rep) {
  return {{"stage", rep.stage},
          {"q_odd", rep.q_odd.str()},
          {"q_even", rep.q_even.str()},
          {"expected", rep.expected.str()},
          {"observed_at_q_odd", rep.observed_at_q_odd},
          {"observed_at_q_even", rep.observed_at_q_even},
          {"pass", rep.pass}};
}

json band_report_to_json(const BandReport& rep) {
  json per_x = json::array();
  for (const auto& e : rep.per_x) {
    json entry = {{"x", rational_to_string(e.x)},
                  {"min_b", e.min_b},
                  {"max_b", e.max_b},
                  {"weak_pass", e.weak_pass},
                  {"strict_pass", e.strict_pass}};
    if (e.bridge_checked) entry["bridge_pass"] = e.bridge_pass;
    per_x.push_back(std::move(entry));
  }
  return {{"stage", rep.stage},
          {"k_sum", rep.k_sum.str()},
          {"q_lo", rep.q_lo.str()},
          {"q_hi", rep.q_hi.str()},
          {"all_weak_pass", rep.all_weak_pass},
          {"strict_count", rep.strict_count},
          {"x_count", rep.per_x.size()},
          {"per_x", std::move(per_x)}};
}

json certificate_to_json(const StageCertificate& cert) {
  json j = {{"mode", cert.mode},
            {"stage", cert.stage},
            {"k", cert.k.str()},
            {"m", cert.m.str()},
            {"q_odd", cert.q_odd.str()},
            {"q_even", cert.q_even.str()},
            {"ln_b", real_to_string(cert.ln_b)},
            {"ln_N", real_to_string(cert.ln_N)},
            {"k_window", {cert.k_window.lo.str(), cert.k_window.hi.str()}},
            {"m_window", {cert.m_window.lo.str(), cert.m_window.hi.str()}}};
  if (cert.ln_c) j["ln_c"] = real_to_string(*cert.ln_c);
  if (cert.ln_d) j["ln_d"] = real_to_string(*cert.ln_d);
  if (cert.ln_eps) j["ln_eps"] = real_to_string(*cert.ln_eps);
  if (cert.slack1) j["slack1"] = real_to_string(*cert.slack1);
  if (cert.slack2) j["slack2"] = real_to_string(*cert.slack2);
  return j;
}

json build_result_to_json(const BuildResult& result, const std::string& mode) {
  json stages = json::array();
  for (const auto& cert : result.certificates) {
    stages.push_back(certificate_to_json(cert));
  }
  json j = {{"mode", mode},
            {"digits", digits_to_json(result.digits)},
            {"stages", std::move(stages)},
            {"verified_to", result.verified_to},
            {"horizon_warning", result.horizon_warning}};
  if (result.onset_found) {
    j["onset_n0"] = result.onset_n0;
  } else {
    j["onset_n0"] = nullptr;
  }
  return j;
}

SqueezeSpec squeeze_spec_from_json(const json& j) {
  SqueezeSpec spec;
  if (!j.contains("c") || !j.contains("d")) {
    throw InfeasibleSpec("squeeze config needs \"c\" and \"d\" arrays");
  }
  for (const auto& s : j.at("c")) {
    spec.c_sources.push_back(s.get<std::string>());
    spec.cs.push_back(parse_expr(spec.c_sources.back()));
  }
  for (const auto& s : j.at("d")) {
    spec.d_sources.push_back(s.get<std::string>());
    spec.ds.push_back(parse_expr(spec.d_sources.back()));
  }
  if (j.contains("N")) spec.n_schedule = ScheduleExpr::parse(j.at("N").get<std::string>());
  if (j.contains("eps")) {
    spec.eps_schedule = ScheduleExpr::parse(j.at("eps").get<std::string>());
  }
  spec.stages = j.value("stages", 0u);
  if (j.contains("k_cap")) spec.k_cap = parse_big_uint(j.at("k_cap").get<std::string>());
  if (j.contains("m_cap")) spec.m_cap = parse_big_uint(j.at("m_cap").get<std::string>());
  return spec;
}

std::string series_to_csv(const DiscrepancySeries& series) {
  std::string out = "n,a_n,b_n\n";
  for (std::size_t n = 0; n < series.a.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += std::to_string(series.a[n]);
    out += ',';
    out += std::to_string(series.b[n]);
    out += '\n';
  }
  return out;
}

}  // namespace rotdisc
