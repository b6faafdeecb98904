#include "harqcc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace harqcc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

struct Entry {
  std::string value;
  int line = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::vector<std::string>> kSchema = {
    {"strategy", {"type", "combining", "m", "n"}},
    {"links",
     {"snr_db", "fading_variance", "sd_snr_db", "sr_snr_db", "rd_snr_db",
      "sd_fading_variance", "sr_fading_variance", "rd_fading_variance"}},
    {"qos", {"theta", "rate"}},
    {"sweep", {"axis", "grid"}},
    {"sim", {"seed", "samples", "blocks", "block_length", "threads"}},
    {"outage", {"scheme", "k1", "k2"}},
    {"output", {"path"}},
};

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> sections;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (kSchema.find(section) == kSchema.end())
        throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value", line_no);
    if (section.empty())
      throw ConfigError("key outside of any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& allowed = kSchema.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in [" + section + "]",
                        line_no);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'",
                                         line_no);
    auto [it, inserted] = sections[section].emplace(key, Entry{value, line_no});
    if (!inserted)
      throw ConfigError("duplicate key '" + key + "'", line_no);
  }
  return sections;
}

double to_num(const Entry& e, const std::string& key) {
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end != e.value.c_str() + e.value.size() || !std::isfinite(v))
    throw ConfigError("'" + key + "' is not a finite number", e.line);
  return v;
}

long to_int(const Entry& e, const std::string& key) {
  char* end = nullptr;
  const long v = std::strtol(e.value.c_str(), &end, 10);
  if (end != e.value.c_str() + e.value.size())
    throw ConfigError("'" + key + "' is not an integer", e.line);
  return v;
}

std::uint64_t to_u64(const Entry& e, const std::string& key) {
  if (!e.value.empty() && e.value.front() == '-')
    throw ConfigError("'" + key + "' must be nonnegative", e.line);
  char* end = nullptr;
  const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
  if (end != e.value.c_str() + e.value.size())
    throw ConfigError("'" + key + "' is not an integer", e.line);
  return v;
}

const Entry* find(const std::map<std::string, Section>& s,
                  const std::string& sec, const std::string& key) {
  auto it = s.find(sec);
  if (it == s.end()) return nullptr;
  auto kt = it->second.find(key);
  return kt == it->second.end() ? nullptr : &kt->second;
}

// Per-field symmetric/per-link resolution for the three channels.
void read_link_field(const std::map<std::string, Section>& s,
                     const std::string& sym_key, double fallback,
                     bool require_some, double* sd, double* sr, double* rd) {
  const Entry* sym = find(s, "links", sym_key);
  const Entry* per[3] = {find(s, "links", "sd_" + sym_key),
                         find(s, "links", "sr_" + sym_key),
                         find(s, "links", "rd_" + sym_key)};
  const bool any_per = per[0] || per[1] || per[2];
  if (sym && any_per)
    throw ConfigError("'" + sym_key + "' conflicts with per-link overrides",
                      sym->line);
  if (sym) {
    *sd = *sr = *rd = to_num(*sym, sym_key);
    return;
  }
  if (any_per) {
    if (!(per[0] && per[1] && per[2]))
      throw ConfigError("per-link '" + sym_key +
                        "' needs all of sd_/sr_/rd_ variants");
    *sd = to_num(*per[0], "sd_" + sym_key);
    *sr = to_num(*per[1], "sr_" + sym_key);
    *rd = to_num(*per[2], "rd_" + sym_key);
    return;
  }
  if (require_some)
    throw ConfigError("[links] needs '" + sym_key + "' or per-link values");
  *sd = *sr = *rd = fallback;
}

std::vector<double> expand_grid(const Entry& e) {
  const std::string& g = e.value;
  std::vector<double> out;
  if (g.find(':') != std::string::npos) {
    double a, b, c;
    char tail;
    if (std::sscanf(g.c_str(), "%lf:%lf:%lf%c", &a, &b, &c, &tail) != 3)
      throw ConfigError("grid must be start:stop:step or a comma list",
                        e.line);
    if (!(c > 0.0)) throw ConfigError("grid step must be positive", e.line);
    if (b < a) throw ConfigError("grid stop is below its start", e.line);
    const double count = std::floor((b - a) / c + 1e-9) + 1;
    if (count > 100000) throw ConfigError("grid has too many points", e.line);
    for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(a + i * c);
  } else {
    std::istringstream ss(g);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v))
        throw ConfigError("grid value '" + tok + "' is not a number", e.line);
      out.push_back(v);
    }
  }
  if (out.empty()) throw ConfigError("grid is empty", e.line);
  for (size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1]))
      throw ConfigError("grid must be strictly increasing", e.line);
  return out;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  const auto s = tokenize(text);
  ScenarioConfig cfg;

  // [strategy]
  const Entry* type = find(s, "strategy", "type");
  if (!type) throw ConfigError("missing [strategy] type");
  if (type->value == "fallback" || type->value == "1") {
    cfg.scenario.strategy = Strategy::kRelayFallback;
    for (const char* k : {"combining", "m", "n"})
      if (const Entry* e = find(s, "strategy", k))
        throw ConfigError(std::string("'") + k +
                              "' only applies to the combining strategy",
                          e->line);
  } else if (type->value == "combining" || type->value == "2") {
    cfg.scenario.strategy = Strategy::kChainCombining;
    if (const Entry* e = find(s, "strategy", "combining")) {
      if (e->value == "rr")
        cfg.scenario.combining = Combining::kRepeat;
      else if (e->value == "ir")
        cfg.scenario.combining = Combining::kMutualInfo;
      else
        throw ConfigError("combining must be rr or ir", e->line);
    } else {
      cfg.scenario.combining = Combining::kRepeat;
    }
    for (auto [key, dst] : {std::pair{"m", &cfg.scenario.source_budget},
                            {"n", &cfg.scenario.relay_budget}}) {
      if (const Entry* e = find(s, "strategy", key)) {
        const long v = to_int(*e, key);
        if (v < 1 || v > 32)
          throw ConfigError(std::string("'") + key + "' must be in 1..32",
                            e->line);
        *dst = static_cast<int>(v);
      }
    }
  } else {
    throw ConfigError("strategy type must be fallback or combining",
                      type->line);
  }

  // [links]
  if (s.find("links") == s.end())
    throw ConfigError("missing [links] section");
  double sd_db, sr_db, rd_db, sd_fv, sr_fv, rd_fv;
  read_link_field(s, "snr_db", 0.0, true, &sd_db, &sr_db, &rd_db);
  read_link_field(s, "fading_variance", 1.0, false, &sd_fv, &sr_fv, &rd_fv);
  for (auto [fv, name] : {std::pair{sd_fv, "sd"}, {sr_fv, "sr"}, {rd_fv, "rd"}})
    if (!(fv > 0.0))
      throw ConfigError(std::string(name) + " fading variance must be > 0");
  cfg.scenario.sd = {snr_from_db(sd_db), sd_fv};
  cfg.scenario.sr = {snr_from_db(sr_db), sr_fv};
  cfg.scenario.rd = {snr_from_db(rd_db), rd_fv};

  // [qos]
  const Entry* theta = find(s, "qos", "theta");
  const Entry* rate = find(s, "qos", "rate");
  if (!theta || !rate) throw ConfigError("[qos] needs both theta and rate");
  cfg.qos.theta = to_num(*theta, "theta");
  cfg.qos.rate = to_num(*rate, "rate");
  // theta = 0 stays parseable for the stochasticity diagnostic of the
  // matrix dump; capacity computations reject it at the command level.
  if (!(cfg.qos.theta >= 0.0))
    throw ConfigError("theta must be >= 0", theta->line);
  if (!(cfg.qos.rate > 0.0)) throw ConfigError("rate must be > 0", rate->line);

  // [sweep]
  if (s.find("sweep") != s.end()) {
    const Entry* axis = find(s, "sweep", "axis");
    const Entry* grid = find(s, "sweep", "grid");
    if (!axis || !grid) throw ConfigError("[sweep] needs axis and grid");
    SweepSpec sw;
    if (axis->value == "snr_db")
      sw.axis = SweepAxis::kSnrDb;
    else if (axis->value == "rate")
      sw.axis = SweepAxis::kRate;
    else if (axis->value == "theta")
      sw.axis = SweepAxis::kTheta;
    else
      throw ConfigError("axis must be snr_db, rate, or theta", axis->line);
    sw.values = expand_grid(*grid);
    if (sw.axis != SweepAxis::kSnrDb && sw.values.front() <= 0.0)
      throw ConfigError("rate and theta grids must be positive", grid->line);
    cfg.sweep = std::move(sw);
  }

  // [sim]
  if (const Entry* e = find(s, "sim", "seed")) {
    cfg.plan.seed = to_u64(*e, "seed");
    cfg.seed_given = true;
  }
  if (const Entry* e = find(s, "sim", "samples")) {
    cfg.plan.samples = to_u64(*e, "samples");
    if (cfg.plan.samples < 10'000)
      throw ConfigError("samples must be >= 10000", e->line);
  }
  if (const Entry* e = find(s, "sim", "blocks")) {
    const long v = to_int(*e, "blocks");
    if (v < 1000) throw ConfigError("blocks must be >= 1000", e->line);
    cfg.plan.blocks = static_cast<int>(v);
  }
  if (const Entry* e = find(s, "sim", "block_length")) {
    const long v = to_int(*e, "block_length");
    if (v < 100) throw ConfigError("block_length must be >= 100", e->line);
    cfg.plan.block_length = static_cast<int>(v);
  }
  if (const Entry* e = find(s, "sim", "threads")) {
    const long v = to_int(*e, "threads");
    if (v < 0) throw ConfigError("threads must be >= 0", e->line);
    cfg.plan.threads = static_cast<int>(v);
  }

  // [outage]
  if (s.find("outage") != s.end()) {
    const Entry* scheme = find(s, "outage", "scheme");
    if (!scheme) throw ConfigError("[outage] needs a scheme");
    const std::map<std::string, OutageScheme> names = {
        {"arq", OutageScheme::kArq},
        {"rr_src", OutageScheme::kRrSource},
        {"rr_comb", OutageScheme::kRrCombined},
        {"ir_src", OutageScheme::kIrSource},
        {"ir_comb", OutageScheme::kIrCombined}};
    auto it = names.find(scheme->value);
    if (it == names.end())
      throw ConfigError(
          "scheme must be one of arq, rr_src, rr_comb, ir_src, ir_comb",
          scheme->line);
    cfg.outage_scheme = it->second;
    for (auto [key, dst] : {std::pair{"k1", &cfg.outage_k1},
                            {"k2", &cfg.outage_k2}}) {
      if (const Entry* e = find(s, "outage", key)) {
        const long v = to_int(*e, key);
        if (v < 1 || v > 32)
          throw ConfigError(std::string("'") + key + "' must be in 1..32",
                            e->line);
        *dst = static_cast<int>(v);
      }
    }
  }

  if (const Entry* e = find(s, "output", "path")) cfg.out_path = e->value;
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string render_table_csv(const DataTable& t) {
  std::string out;
  if (!t.params.empty()) {
    out += "# params:";
    for (const auto& [k, v] : t.params) out += " " + k + "=" + v;
    out += "\n";
  }
  out += "# columns: ";
  for (size_t i = 0; i < t.columns.size(); ++i)
    out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& n : t.notes) out += "# note: " + n + "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + fmt_g(row[i]);
    out += "\n";
  }
  return out;
}

DataTable parse_table_csv(const std::string& text) {
  DataTable t;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool have_columns = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("# params:", 0) == 0) {
        std::istringstream ps(line.substr(9));
        std::string tok;
        while (ps >> tok) {
          const size_t eq = tok.find('=');
          if (eq == std::string::npos)
            throw ConfigError("malformed params entry '" + tok + "'", line_no);
          t.params.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
        }
      } else if (line.rfind("# columns:", 0) == 0) {
        std::istringstream cs(trim(line.substr(10)));
        std::string tok;
        while (std::getline(cs, tok, ',')) t.columns.push_back(trim(tok));
        if (t.columns.empty())
          throw ConfigError("empty columns line", line_no);
        have_columns = true;
      } else if (line.rfind("# note:", 0) == 0) {
        t.notes.push_back(trim(line.substr(7)));
      }
      continue;
    }
    if (!have_columns)
      throw ConfigError("data row before '# columns:' line", line_no);
    std::vector<double> row;
    std::istringstream rs(line);
    std::string tok;
    while (std::getline(rs, tok, ',')) {
      tok = trim(tok);
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (tok.empty() || end != tok.c_str() + tok.size())
        throw ConfigError("bad numeric cell '" + tok + "'", line_no);
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw ConfigError("row has " + std::to_string(row.size()) +
                            " cells, expected " +
                            std::to_string(t.columns.size()),
                        line_no);
    t.rows.push_back(std::move(row));
  }
  if (!have_columns) throw ConfigError("missing '# columns:' line");
  return t;
}

DataTable to_table(const CurveTable& c) {
  DataTable t;
  t.params = c.params;
  t.columns = {c.x_name, c.y_name};
  for (size_t i = 0; i < c.xs.size(); ++i)
    t.rows.push_back({c.xs[i], c.ys[i]});
  t.notes = c.diagnostics;
  return t;
}

CurveTable to_curve(const DataTable& t) {
  if (t.columns.size() != 2)
    throw ConfigError("curve table needs exactly two columns");
  CurveTable c;
  c.x_name = t.columns[0];
  c.y_name = t.columns[1];
  c.params = t.params;
  c.diagnostics = t.notes;
  for (const auto& row : t.rows) {
    c.xs.push_back(row[0]);
    c.ys.push_back(row[1]);
  }
  return c;
}

std::string render_matrix_csv(const CompanionMatrix& a, bool column_sums) {
  std::string out = "# L=" + std::to_string(a.size) + "\n";
  for (int r = 0; r < a.size; ++r) {
    for (int c = 0; c < a.size; ++c)
      out += (c ? "," : "") + fmt_g(a.at(r, c));
    out += "\n";
  }
  if (column_sums) {
    out += "# column_sums:";
    for (int c = 0; c < a.size; ++c) {
      double s = 0.0;
      for (int r = 0; r < a.size; ++r) s += a.at(r, c);
      out += std::string(c ? "," : " ") + fmt_g(s);
    }
    out += "\n";
  }
  return out;
}

CompanionMatrix parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  CompanionMatrix m;
  int rows_seen = 0;
  bool have_size = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (!have_size) {
      // The size header is written as a comment ("# L=n"); a bare "L=n"
      // is accepted too.
      if (line.front() == '#') {
        line = trim(line.substr(1));
        if (line.rfind("L=", 0) != 0) continue;
      }
      if (line.rfind("L=", 0) != 0)
        throw ConfigError("matrix dump must start with L=<n>", line_no);
      char* end = nullptr;
      const long n = std::strtol(line.c_str() + 2, &end, 10);
      if (end != line.c_str() + line.size() || n < 1)
        throw ConfigError("bad matrix size", line_no);
      m.size = static_cast<int>(n);
      m.a.assign(static_cast<size_t>(n) * n, 0.0);
      have_size = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (rows_seen >= m.size)
      throw ConfigError("more rows than the declared size", line_no);
    std::istringstream rs(line);
    std::string tok;
    int col = 0;
    while (std::getline(rs, tok, ',')) {
      tok = trim(tok);
      if (col >= m.size)
        throw ConfigError("more cells than the declared size", line_no);
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (tok.empty() || end != tok.c_str() + tok.size())
        throw ConfigError("bad numeric cell '" + tok + "'", line_no);
      m.at(rows_seen, col++) = v;
    }
    if (col != m.size)
      throw ConfigError("row has too few cells", line_no);
    ++rows_seen;
  }
  if (!have_size || rows_seen != m.size)
    throw ConfigError("matrix dump is incomplete");
  return m;
}

}  // namespace harqcc
