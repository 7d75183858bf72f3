#include "flowgraph/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "flowgraph/error.hpp"
#include "flowgraph/mps.hpp"

namespace flowgraph {

namespace {

using Row = std::vector<std::string>;

class CsvTable {
 public:
  CsvTable(const std::filesystem::path& path, std::vector<std::string> required) : file_(path.filename().string()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::string line;
    int number = 0;
    bool header = true;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (header && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (line.empty()) continue;
      Row cells = split(line, number);
      if (header) {
        for (std::size_t k = 0; k < cells.size(); ++k) columns_[cells[k]] = k;
        header = false;
        continue;
      }
      rows_.push_back(std::move(cells));
      lines_.push_back(number);
    }
    if (header) throw Error(ErrorCode::ParseError, file_ + ": missing header row");
    for (const auto& name : required)
      if (!columns_.count(name)) throw Error(ErrorCode::ParseError, file_ + ": missing column '" + name + "'");
  }

  std::size_t size() const { return rows_.size(); }

  // Cell text, empty when the column is absent or the row is short.
  std::string cell(std::size_t row, const std::string& column) const {
    auto it = columns_.find(column);
    if (it == columns_.end() || it->second >= rows_[row].size()) return {};
    return rows_[row][it->second];
  }

  std::optional<double> number(std::size_t row, const std::string& column) const {
    const std::string text = cell(row, column);
    if (text.empty()) return std::nullopt;
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) fail(row, column, "'" + text + "' is not a number");
    return value;
  }

  double number_or(std::size_t row, const std::string& column, double fallback) const {
    return number(row, column).value_or(fallback);
  }

  int integer_or(std::size_t row, const std::string& column, int fallback) const {
    const std::string text = cell(row, column);
    if (text.empty()) return fallback;
    int value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) fail(row, column, "'" + text + "' is not an integer");
    return value;
  }

  bool flag(std::size_t row, const std::string& column) const {
    const std::string text = cell(row, column);
    if (text.empty() || text == "0" || text == "false") return false;
    if (text == "1" || text == "true") return true;
    fail(row, column, "'" + text + "' is not a boolean");
  }

  std::string required(std::size_t row, const std::string& column) const {
    std::string text = cell(row, column);
    if (text.empty()) fail(row, column, "value required");
    return text;
  }

  [[noreturn]] void fail(std::size_t row, const std::string& column, const std::string& message) const {
    throw Error(ErrorCode::ParseError,
                file_ + " line " + std::to_string(lines_[row]) + ", column " + column + ": " + message);
  }

 private:
  Row split(const std::string& line, int number) const {
    Row cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (quoted) throw Error(ErrorCode::ParseError, file_ + " line " + std::to_string(number) + ": unterminated quote");
    cells.push_back(std::move(cur));
    return cells;
  }

  std::string file_;
  std::map<std::string, std::size_t> columns_;
  std::vector<Row> rows_;
  std::vector<int> lines_;
};

std::string num(double v) { return format_double(v); }
std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }
const char* flag(bool b) { return b ? "true" : "false"; }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
  return out;
}

}  // namespace

void write_case_csv(const EnergySystem& system, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + dir.string() + ": " + ec.message());

  auto assets = open_out(dir / "assets.csv");
  assets << "id,kind,capacity_mw,min_capacity_mw,initial_units,investable,invest_limit,invest_cost,"
            "storage_capacity_mwh,initial_storage_mwh,eta_in,eta_out,uc,dc\n";
  for (const auto& a : system.assets()) {
    assets << a.id << ',' << to_string(a.kind) << ',' << num(a.capacity_mw) << ',' << num(a.min_capacity_mw) << ','
           << a.initial_units << ',' << flag(a.investable) << ',' << a.invest_limit << ',' << num(a.invest_cost) << ','
           << opt(a.storage_capacity_mwh) << ',' << opt(a.initial_storage_mwh) << ',' << num(a.eta_in) << ','
           << num(a.eta_out) << ',' << flag(a.uc_enabled) << ',' << flag(a.voltage_angle_enabled) << '\n';
  }

  auto flows = open_out(dir / "flows.csv");
  flows << "from,to,max_fwd_mw,max_bwd_mw,op_cost,reactance_pu,s_base_mva\n";
  for (const auto& f : system.arcs()) {
    flows << f.from << ',' << f.to << ',' << opt(f.max_fwd_mw) << ','
          << (f.two_sided ? num(f.max_bwd_mw) : std::string{}) << ',' << num(f.op_cost) << ','
          << (f.dc ? num(f.dc->reactance_pu) : std::string{}) << ',' << (f.dc ? num(f.dc->s_base_mva) : std::string{})
          << '\n';
  }

  auto hubs = open_out(dir / "hubs.csv");
  hubs << "hub_id,asset_id,direction\n";
  auto forbidden = open_out(dir / "forbidden.csv");
  forbidden << "hub_id,source,sink\n";
  for (const auto& h : system.hubs()) {
    for (const auto& p : h.member_ports)
      hubs << h.id << ',' << p.asset << ',' << (p.direction == PortDirection::In ? "in" : "out") << '\n';
    for (const auto& r : h.forbidden_routes) forbidden << h.id << ',' << r.source << ',' << r.sink << '\n';
  }

  auto profiles = open_out(dir / "profiles.csv");
  profiles << "asset_id,timestep,value\n";
  for (const auto& a : system.assets()) {
    const auto& p = a.kind == AssetKind::Consumer ? a.demand_profile : a.availability_profile;
    for (std::size_t i = 0; i < p.size(); ++i) profiles << a.id << ',' << i + 1 << ',' << num(p[i]) << '\n';
  }
  for (auto* out : {&assets, &flows, &hubs, &forbidden, &profiles}) {
    out->flush();
    if (!*out) throw Error(ErrorCode::IoFailure, "write failed in " + dir.string());
  }
}

EnergySystem read_case_csv(const std::filesystem::path& dir) {
  EnergySystem system;

  CsvTable assets(dir / "assets.csv", {"id", "kind"});
  for (std::size_t r = 0; r < assets.size(); ++r) {
    Asset a;
    a.id = assets.required(r, "id");
    const auto kind = parse_asset_kind(assets.required(r, "kind"));
    if (!kind) assets.fail(r, "kind", "unknown asset kind '" + assets.cell(r, "kind") + "'");
    a.kind = *kind;
    a.capacity_mw = assets.number_or(r, "capacity_mw", 0.0);
    a.min_capacity_mw = assets.number_or(r, "min_capacity_mw", 0.0);
    a.initial_units = assets.integer_or(r, "initial_units", a.kind == AssetKind::Consumer ? 0 : 1);
    a.investable = assets.flag(r, "investable");
    a.invest_limit = assets.integer_or(r, "invest_limit", 0);
    a.invest_cost = assets.number_or(r, "invest_cost", 0.0);
    a.storage_capacity_mwh = assets.number(r, "storage_capacity_mwh");
    a.initial_storage_mwh = assets.number(r, "initial_storage_mwh");
    a.eta_in = assets.number_or(r, "eta_in", 1.0);
    a.eta_out = assets.number_or(r, "eta_out", 1.0);
    a.uc_enabled = assets.flag(r, "uc");
    a.voltage_angle_enabled = assets.flag(r, "dc");
    if (system.find_asset(a.id)) assets.fail(r, "id", "duplicate asset '" + a.id + "'");
    system.push_asset(std::move(a));
  }

  CsvTable flows(dir / "flows.csv", {"from", "to"});
  for (std::size_t r = 0; r < flows.size(); ++r) {
    FlowArc f;
    f.from = flows.required(r, "from");
    f.to = flows.required(r, "to");
    f.max_fwd_mw = flows.number(r, "max_fwd_mw");
    if (f.max_fwd_mw && std::isinf(*f.max_fwd_mw)) f.max_fwd_mw.reset();
    if (auto bwd = flows.number(r, "max_bwd_mw")) {
      f.two_sided = true;
      f.max_bwd_mw = *bwd;
    }
    f.op_cost = flows.number_or(r, "op_cost", 0.0);
    const auto x = flows.number(r, "reactance_pu");
    if (x) f.dc = DcFlowParams{*x, flows.number_or(r, "s_base_mva", 100.0)};
    system.push_arc(std::move(f));
  }

  std::map<std::string, HubAnnotation> hub_map;
  std::vector<std::string> hub_order;
  auto hub_named = [&](const std::string& id) -> HubAnnotation& {
    auto [it, fresh] = hub_map.try_emplace(id);
    if (fresh) {
      it->second.id = id;
      hub_order.push_back(id);
    }
    return it->second;
  };
  CsvTable hubs(dir / "hubs.csv", {"hub_id", "asset_id", "direction"});
  for (std::size_t r = 0; r < hubs.size(); ++r) {
    const std::string direction = hubs.required(r, "direction");
    if (direction != "in" && direction != "out") hubs.fail(r, "direction", "expected 'in' or 'out'");
    hub_named(hubs.required(r, "hub_id"))
        .member_ports.push_back({hubs.required(r, "asset_id"), direction == "in" ? PortDirection::In : PortDirection::Out});
  }
  CsvTable forbidden(dir / "forbidden.csv", {"hub_id", "source", "sink"});
  for (std::size_t r = 0; r < forbidden.size(); ++r)
    hub_named(forbidden.required(r, "hub_id"))
        .forbidden_routes.push_back({forbidden.required(r, "source"), forbidden.required(r, "sink")});
  for (const auto& id : hub_order) system.push_hub(std::move(hub_map[id]));

  CsvTable profiles(dir / "profiles.csv", {"asset_id", "timestep", "value"});
  int horizon = 1;
  std::map<std::string, std::map<int, double>> series;
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    const std::string id = profiles.required(r, "asset_id");
    const int t = profiles.integer_or(r, "timestep", 0);
    if (t < 1) profiles.fail(r, "timestep", "timesteps start at 1");
    const auto v = profiles.number(r, "value");
    if (!v) profiles.fail(r, "value", "value required");
    if (!system.find_asset(id)) profiles.fail(r, "asset_id", "unknown asset '" + id + "'");
    if (!series[id].emplace(t, *v).second) profiles.fail(r, "timestep", "duplicate timestep for '" + id + "'");
    horizon = std::max(horizon, t);
  }
  system.set_horizon(horizon);
  for (auto& [id, values] : series) {
    Asset* a = system.find_asset(id);
    auto& target = a->kind == AssetKind::Consumer ? a->demand_profile : a->availability_profile;
    const int length = values.rbegin()->first;
    if (static_cast<int>(values.size()) != length)
      throw Error(ErrorCode::ParseError, "profiles.csv: asset '" + id + "' has gaps in its timesteps");
    target.clear();
    for (const auto& [t, v] : values) target.push_back(v);
  }
  return system;
}

}  // namespace flowgraph
