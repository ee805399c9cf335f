#include "cascade/runner/scenario_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "cascade/runner/csv.hpp"

namespace cascade::runner {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

struct Context {
  std::string_view source;
  std::size_t line;

  [[noreturn]] void fail(std::size_t column, const std::string& message) const
  {
    throw ScenarioParseError(std::string(source), line, column, message);
  }
};

std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Splits "12.5ms" or "12.5 ms" into the number and its unit.
std::pair<double, std::string_view> number_with_unit(const Context& ctx, Token v)
{
  double x = 0.0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || !std::isfinite(x))
    ctx.fail(v.column, "expected a number, got '" + std::string(v.text) + "'");
  return {x, trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)))};
}

double plain_number(const Context& ctx, Token v)
{
  auto [x, unit] = number_with_unit(ctx, v);
  if (!unit.empty())
    ctx.fail(v.column, "unexpected unit '" + std::string(unit) + "'");
  return x;
}

double duration(const Context& ctx, Token v)
{
  auto [x, unit] = number_with_unit(ctx, v);
  if (unit == "s")
    return x;
  if (unit == "ms")
    return x * 1e-3;
  if (unit == "us")
    return x * 1e-6;
  ctx.fail(v.column, unit.empty() ? "duration needs a unit (s, ms, us)" : "unknown duration unit '" + std::string(unit) + "'");
}

double packet_rate(const Context& ctx, Token v)
{
  auto [x, unit] = number_with_unit(ctx, v);
  if (unit != "pkts_s")
    ctx.fail(v.column, "arrival rates need the unit pkts_s");
  return x;
}

double bit_rate(const Context& ctx, Token v)
{
  auto [x, unit] = number_with_unit(ctx, v);
  if (unit != "mbps")
    ctx.fail(v.column, "bit_rate needs the unit mbps");
  return x * 1e6;
}

template <class Int>
Int integer(const Context& ctx, Token v, std::string_view allowed_unit = {})
{
  std::string_view text = v.text;
  if (!allowed_unit.empty() && text.size() > allowed_unit.size() &&
      text.substr(text.size() - allowed_unit.size()) == allowed_unit)
    text = trim(text.substr(0, text.size() - allowed_unit.size()));
  Int x{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size())
    ctx.fail(v.column, "expected an integer, got '" + std::string(v.text) + "'");
  return x;
}

bool boolean(const Context& ctx, Token v)
{
  if (v.text == "true")
    return true;
  if (v.text == "false")
    return false;
  ctx.fail(v.column, "expected true or false");
}

using Setter = std::function<void(mac::ScenarioSpec&, const Context&, Token)>;

const std::map<std::string, Setter, std::less<>>& setters()
{
  using mac::ScenarioSpec;
  static const std::map<std::string, Setter, std::less<>> table = {
      {"topology",
       [](ScenarioSpec& s, const Context& c, Token v) {
         if (v.text == "linear")
           s.topology = mac::TopologyKind::Linear;
         else if (v.text == "ring")
           s.topology = mac::TopologyKind::Ring;
         else
           c.fail(v.column, "topology must be linear or ring");
       }},
      {"n_pairs", [](ScenarioSpec& s, const Context& c, Token v) { s.n_pairs = integer<int>(c, v); }},
      {"arrival_rate", [](ScenarioSpec& s, const Context& c, Token v) { s.arrival_rate = packet_rate(c, v); }},
      {"attacker_rate", [](ScenarioSpec& s, const Context& c, Token v) { s.attacker_rate = packet_rate(c, v); }},
      {"burst_rate", [](ScenarioSpec& s, const Context& c, Token v) { s.burst_rate = packet_rate(c, v); }},
      {"burst_start", [](ScenarioSpec& s, const Context& c, Token v) { s.burst_start = duration(c, v); }},
      {"burst_end", [](ScenarioSpec& s, const Context& c, Token v) { s.burst_end = duration(c, v); }},
      {"load_range",
       [](ScenarioSpec& s, const Context& c, Token v) {
         const auto colon = v.text.find(':');
         if (colon == std::string_view::npos)
           c.fail(v.column, "load_range must be written lo:hi");
         mac::LoadRange r;
         r.lo = plain_number(c, {trim(v.text.substr(0, colon)), v.column});
         r.hi = plain_number(c, {trim(v.text.substr(colon + 1)), v.column + colon + 1});
         s.load_range = r;
       }},
      {"packet_size", [](ScenarioSpec& s, const Context& c, Token v) { s.packet_size = integer<int>(c, v, "bytes"); }},
      {"bit_rate", [](ScenarioSpec& s, const Context& c, Token v) { s.bit_rate = bit_rate(c, v); }},
      {"policy",
       [](ScenarioSpec& s, const Context& c, Token v) {
         if (v.text == "fixed")
           s.policy = mac::RatePolicy::Fixed;
         else if (v.text == "minstrel")
           s.policy = mac::RatePolicy::Minstrel;
         else
           c.fail(v.column, "policy must be fixed or minstrel");
       }},
      {"retry_limit", [](ScenarioSpec& s, const Context& c, Token v) { s.retry_limit = integer<int>(c, v); }},
      {"cw1", [](ScenarioSpec& s, const Context& c, Token v) { s.cw1 = integer<int>(c, v, "slots"); }},
      {"cw_max", [](ScenarioSpec& s, const Context& c, Token v) { s.cw_max = integer<int>(c, v, "slots"); }},
      {"slot", [](ScenarioSpec& s, const Context& c, Token v) { s.slot = duration(c, v); }},
      {"difs", [](ScenarioSpec& s, const Context& c, Token v) { s.difs = duration(c, v); }},
      {"sifs", [](ScenarioSpec& s, const Context& c, Token v) { s.sifs = duration(c, v); }},
      {"rts_cts", [](ScenarioSpec& s, const Context& c, Token v) { s.rts_cts = boolean(c, v); }},
      {"access_mode",
       [](ScenarioSpec& s, const Context& c, Token v) {
         if (v.text == "dcf")
           s.access_mode = mac::AccessMode::Dcf;
         else if (v.text == "stylized")
           s.access_mode = mac::AccessMode::Stylized;
         else
           c.fail(v.column, "access_mode must be dcf or stylized");
       }},
      {"retry_delay", [](ScenarioSpec& s, const Context& c, Token v) { s.retry_delay = duration(c, v); }},
      {"duration", [](ScenarioSpec& s, const Context& c, Token v) { s.duration = duration(c, v); }},
      {"warmup", [](ScenarioSpec& s, const Context& c, Token v) { s.warmup = duration(c, v); }},
      {"sample_window", [](ScenarioSpec& s, const Context& c, Token v) { s.sample_window = duration(c, v); }},
      {"lookaround", [](ScenarioSpec& s, const Context& c, Token v) { s.lookaround = plain_number(c, v); }},
      {"ewma", [](ScenarioSpec& s, const Context& c, Token v) { s.ewma = plain_number(c, v); }},
      {"rate_update_interval",
       [](ScenarioSpec& s, const Context& c, Token v) { s.rate_update_interval = duration(c, v); }},
      {"seed", [](ScenarioSpec& s, const Context& c, Token v) { s.seed = integer<std::uint64_t>(c, v); }},
  };
  return table;
}

}  // namespace

ScenarioParseError::ScenarioParseError(std::string source, std::size_t line, std::size_t column,
                                       const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

mac::ScenarioSpec parse_scenario_text(std::string_view text, std::string_view source)
{
  mac::ScenarioSpec spec;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const Context ctx{source, line_no};

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    if (trim(line).empty())
      continue;

    const auto eq = line.find('=');
    const std::size_t key_col = line.find_first_not_of(" \t") + 1;
    if (eq == std::string_view::npos)
      ctx.fail(key_col, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty())
      ctx.fail(key_col, "missing key before '='");

    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end())
      ctx.fail(key_col, "unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second)
      ctx.fail(key_col, "duplicate key '" + std::string(key) + "'");

    const std::string_view raw = line.substr(eq + 1);
    const std::string_view value = trim(raw);
    const std::size_t value_col = eq + 2 + (value.empty() ? 0 : raw.find_first_not_of(" \t"));
    if (value.empty())
      ctx.fail(value_col, "missing value for '" + std::string(key) + "'");
    it->second(spec, ctx, Token{value, value_col});
  }
  spec.validate();
  return spec;
}

mac::ScenarioSpec parse_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.string());
}

std::string format_scenario(const mac::ScenarioSpec& s)
{
  std::ostringstream out;
  auto line = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
  auto seconds = [](double x) { return format_number(x) + " s"; };
  auto pkts = [](double x) { return format_number(x) + " pkts_s"; };

  line("topology", std::string(mac::to_string(s.topology)));
  line("n_pairs", std::to_string(s.n_pairs));
  line("arrival_rate", pkts(s.arrival_rate));
  line("attacker_rate", pkts(s.attacker_rate));
  if (s.burst_rate) {
    line("burst_rate", pkts(*s.burst_rate));
    line("burst_start", seconds(s.burst_start));
    line("burst_end", seconds(s.burst_end));
  }
  if (s.load_range)
    line("load_range", format_number(s.load_range->lo) + ":" + format_number(s.load_range->hi));
  line("packet_size", std::to_string(s.packet_size) + " bytes");
  line("bit_rate", format_number(s.bit_rate / 1e6) + " mbps");
  line("policy", std::string(mac::to_string(s.policy)));
  line("retry_limit", std::to_string(s.retry_limit));
  line("cw1", std::to_string(s.cw1));
  line("cw_max", std::to_string(s.cw_max));
  line("slot", seconds(s.slot));
  line("difs", seconds(s.difs));
  line("sifs", seconds(s.sifs));
  line("rts_cts", s.rts_cts ? "true" : "false");
  line("access_mode", std::string(mac::to_string(s.access_mode)));
  line("retry_delay", seconds(s.retry_delay));
  line("duration", seconds(s.duration));
  if (s.warmup)
    line("warmup", seconds(*s.warmup));
  line("sample_window", seconds(s.sample_window));
  line("lookaround", format_number(s.lookaround));
  line("ewma", format_number(s.ewma));
  line("rate_update_interval", seconds(s.rate_update_interval));
  line("seed", std::to_string(s.seed));
  return out.str();
}

}  // namespace cascade::runner
