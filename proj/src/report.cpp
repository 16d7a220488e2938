#include "cubicsum/report.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"

#include "cubicsum/errors.hpp"

namespace cubicsum {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string mpz_str(const mpz_class& z) { return z.get_str(); }

// JSON has no NaN/Inf literals; nlohmann would emit null.  Doubles appear as
// shortest-roundtrip strings in CSV and as native numbers in JSON, where
// non-finite values degrade to null consistently.
ordered_json json_double(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

ordered_json factors_json(const Factorization& f) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : f.entries) {
    ordered_json ent;
    ent["prime"] = mpz_str(e.prime);
    ent["exp"] = e.exp;
    arr.push_back(ent);
  }
  return arr;
}

void dump(std::ostream& os, const ordered_json& j) { os << j.dump(2) << '\n'; }

}  // namespace

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw invalid_input("format must be csv or json, got '" + s + "'");
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_approx(std::ostream& os, Format fmt, const RationalApprox& approx) {
  if (fmt == Format::json) {
    ordered_json j;
    j["a"] = mpz_str(approx.a);
    j["q"] = mpz_str(approx.q);
    j["err_bound"] = json_double(approx.err_bound);
    j["q_factors"] = factors_json(approx.q_factors);
    j["smoothness_exponent"] = json_double(approx.smoothness_exponent);
    j["smoothness_certified"] = approx.smoothness_certified;
    j["n_index"] = approx.n_index;
    j["m_used"] = mpz_str(approx.m_used);
    dump(os, j);
    return;
  }
  os << "a,q,err_bound,smoothness_exponent,smoothness_certified\n"
     << mpz_str(approx.a) << ',' << mpz_str(approx.q) << ','
     << format_double(approx.err_bound) << ','
     << format_double(approx.smoothness_exponent) << ','
     << (approx.smoothness_certified ? "true" : "false") << '\n';
}

void write_sum(std::ostream& os, Format fmt, const std::string& alpha,
               int64_t n, const SumValue& value) {
  if (fmt == Format::json) {
    ordered_json j;
    j["alpha"] = alpha;
    j["N"] = n;
    j["re"] = json_double(value.re);
    j["im"] = json_double(value.im);
    j["abs"] = json_double(value.abs());
    j["err"] = json_double(value.err);
    dump(os, j);
    return;
  }
  os << "N,re,im,abs,err\n"
     << n << ',' << format_double(value.re) << ',' << format_double(value.im)
     << ',' << format_double(value.abs()) << ',' << format_double(value.err)
     << '\n';
}

void write_spectrum(std::ostream& os, Format fmt, int64_t a, int64_t q,
                    const std::vector<SumValue>& spectrum) {
  if (fmt == Format::json) {
    ordered_json j;
    j["a"] = a;
    j["q"] = q;
    ordered_json rows = ordered_json::array();
    for (size_t h = 0; h < spectrum.size(); ++h) {
      ordered_json row;
      row["h"] = h;
      row["re"] = json_double(spectrum[h].re);
      row["im"] = json_double(spectrum[h].im);
      rows.push_back(row);
    }
    j["spectrum"] = rows;
    dump(os, j);
    return;
  }
  os << "h,re,im\n";
  for (size_t h = 0; h < spectrum.size(); ++h)
    os << h << ',' << format_double(spectrum[h].re) << ','
       << format_double(spectrum[h].im) << '\n';
}

void write_split(std::ostream& os, Format fmt, const FactorSplit& split) {
  if (fmt == Format::json) {
    ordered_json j;
    j["q"] = split.q;
    j["N"] = split.N;
    j["q0"] = split.q0;
    j["q1"] = split.q1;
    j["q2"] = split.q2;
    j["q3"] = split.q3;
    j["K"] = split.K();
    j["M"] = split.M();
    j["U"] = split.U();
    dump(os, j);
    return;
  }
  os << "q,N,q0,q1,q2,q3,K,M,U\n"
     << split.q << ',' << split.N << ',' << split.q0 << ',' << split.q1 << ','
     << split.q2 << ',' << split.q3 << ',' << split.K() << ',' << split.M()
     << ',' << split.U() << '\n';
}

void write_suite(std::ostream& os, Format fmt, const SuiteReport& report) {
  if (fmt == Format::json) {
    ordered_json j;
    j["name"] = report.name;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["threshold"] = json_double(report.threshold);
    j["max_ratio"] = json_double(report.max_ratio);
    j["pass"] = report.pass;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.records) {
      ordered_json row;
      row["trial"] = r.trial;
      row["inputs"] = r.inputs;
      row["lhs"] = json_double(r.lhs);
      row["rhs"] = json_double(r.rhs);
      row["ratio"] = json_double(r.ratio);
      rows.push_back(row);
    }
    j["records"] = rows;
    dump(os, j);
    return;
  }
  os << "trial,lhs,rhs,ratio\n";
  for (const auto& r : report.records)
    os << r.trial << ',' << format_double(r.lhs) << ',' << format_double(r.rhs)
       << ',' << format_double(r.ratio) << '\n';
}

void write_trace(std::ostream& os, Format fmt, const TraceReport& report) {
  if (fmt == Format::json) {
    ordered_json j;
    ordered_json sp;
    sp["q"] = report.split.q;
    sp["N"] = report.split.N;
    sp["q1"] = report.split.q1;
    sp["q2"] = report.split.q2;
    sp["q3"] = report.split.q3;
    sp["K"] = report.split.K();
    sp["M"] = report.split.M();
    sp["U"] = report.split.U();
    j["split"] = sp;
    j["a"] = report.a;
    j["a1"] = report.a1;
    j["b"] = report.b;
    j["b1"] = report.b1;
    j["c"] = report.c;
    j["min_cs1_slack"] = json_double(report.min_cs1_slack);
    j["min_cs2_slack"] = json_double(report.min_cs2_slack);
    j["max_env1_ratio"] = json_double(report.max_env1_ratio);
    j["max_env4_ratio"] = json_double(report.max_env4_ratio);
    j["max_kernel_ratio"] = json_double(report.max_kernel_ratio);
    j["max_eta2_mismatch"] = json_double(report.max_eta2_mismatch);
    j["max_eta5_mismatch"] = json_double(report.max_eta5_mismatch);
    j["cs_ok"] = report.cs_ok;
    j["details_included"] = report.details_included;
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
      ordered_json row;
      row["r"] = r.r;
      row["eta"] = json_double(r.eta);
      row["prefix_len"] = r.prefix_len;
      row["eta1"] = json_double(r.eta1);
      row["eta2"] = json_double(r.eta2);
      row["eta2_expanded"] = json_double(r.eta2_expanded);
      row["cs1_slack"] = json_double(r.cs1_slack);
      row["env1_ratio"] = json_double(r.env1_ratio);
      rows.push_back(row);
    }
    j["rows"] = rows;
    if (report.details_included) {
      ordered_json cells = ordered_json::array();
      for (const auto& cel : report.cells) {
        ordered_json row;
        row["r"] = cel.r;
        row["m"] = cel.m;
        row["eta3_abs"] = json_double(cel.eta3_abs);
        row["eta4"] = json_double(cel.eta4);
        row["eta5"] = json_double(cel.eta5);
        row["eta5_expanded"] = json_double(cel.eta5_expanded);
        row["cs2_slack"] = json_double(cel.cs2_slack);
        row["env4_ratio"] = json_double(cel.env4_ratio);
        row["tri2_slack"] = json_double(cel.tri2_slack);
        cells.push_back(row);
      }
      j["cells"] = cells;
      ordered_json cells6 = ordered_json::array();
      for (const auto& cel : report.cells6) {
        ordered_json row;
        row["r"] = cel.r;
        row["m"] = cel.m;
        row["u"] = cel.u;
        row["eta6_abs"] = json_double(cel.eta6_abs);
        row["kernel_envelope"] = json_double(cel.kernel_envelope);
        row["ratio"] = json_double(cel.ratio);
        cells6.push_back(row);
      }
      j["cells6"] = cells6;
    }
    dump(os, j);
    return;
  }
  os << "r,eta,prefix_len,eta1,eta2,eta2_expanded,cs1_slack,env1_ratio\n";
  for (const auto& r : report.rows)
    os << r.r << ',' << format_double(r.eta) << ',' << r.prefix_len << ','
       << format_double(r.eta1) << ',' << format_double(r.eta2) << ','
       << format_double(r.eta2_expanded) << ',' << format_double(r.cs1_slack)
       << ',' << format_double(r.env1_ratio) << '\n';
}

void write_scan(std::ostream& os, Format fmt, const std::string& alpha,
                const std::vector<ScanRecord>& records) {
  if (fmt == Format::json) {
    ordered_json j;
    j["alpha"] = alpha;
    ordered_json rows = ordered_json::array();
    for (const auto& r : records) {
      ordered_json row;
      row["N"] = r.N;
      row["abs_sum"] = json_double(r.abs_sum);
      row["running_sup"] = json_double(r.running_sup);
      row["slope"] = json_double(r.slope);
      row["split_feasible"] = r.split_feasible;
      if (r.split_feasible) {
        row["q"] = r.q;
        row["delta_abs"] = json_double(r.delta_abs);
        row["rhs"] = json_double(r.rhs);
        row["ratio"] = json_double(r.ratio);
      }
      rows.push_back(row);
    }
    j["records"] = rows;
    dump(os, j);
    return;
  }
  os << "N,abs_sum,running_sup,slope\n";
  for (const auto& r : records)
    os << r.N << ',' << format_double(r.abs_sum) << ','
       << format_double(r.running_sup) << ',' << format_double(r.slope) << '\n';
}

void write_abc(std::ostream& os, Format fmt, int64_t d,
               const std::vector<AbcRow>& rows) {
  if (fmt == Format::json) {
    ordered_json j;
    j["d"] = d;
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row;
      row["n"] = r.n;
      row["v"] = mpz_str(r.v);
      row["v0"] = mpz_str(r.v0);
      row["exponent"] = json_double(r.exponent);
      row["factored"] = r.factored;
      arr.push_back(row);
    }
    j["rows"] = arr;
    dump(os, j);
    return;
  }
  os << "n,v,v0,exponent\n";
  for (const auto& r : rows)
    os << r.n << ',' << mpz_str(r.v) << ',' << mpz_str(r.v0) << ','
       << format_double(r.exponent) << '\n';
}

}  // namespace cubicsum
