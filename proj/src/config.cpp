#include "lasalt/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "lasalt/errors.hpp"

namespace lasalt::io {

namespace {

struct Value {
  enum Kind { Str, Num, Bool, Arr } kind = Num;
  std::string str;
  double num = 0.0;
  bool is_int = false;
  std::uint64_t uint = 0;
  bool boolean = false;
  std::vector<Value> arr;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

Value parse_value(const std::string& s, std::size_t& i, int line);

Value parse_array(const std::string& s, std::size_t& i, int line) {
  Value v;
  v.kind = Value::Arr;
  v.line = line;
  ++i;  // '['
  skip_ws(s, i);
  if (i < s.size() && s[i] == ']') {
    ++i;
    return v;
  }
  while (true) {
    v.arr.push_back(parse_value(s, i, line));
    skip_ws(s, i);
    if (i < s.size() && s[i] == ',') {
      ++i;
      skip_ws(s, i);
      continue;
    }
    if (i < s.size() && s[i] == ']') {
      ++i;
      return v;
    }
    fail(line, "expected ',' or ']' in array");
  }
}

Value parse_value(const std::string& s, std::size_t& i, int line) {
  skip_ws(s, i);
  if (i >= s.size()) fail(line, "missing value");
  Value v;
  v.line = line;
  if (s[i] == '"') {
    v.kind = Value::Str;
    ++i;
    while (i < s.size() && s[i] != '"') v.str.push_back(s[i++]);
    if (i >= s.size()) fail(line, "unterminated string");
    ++i;
    return v;
  }
  if (s[i] == '[') return parse_array(s, i, line);
  std::size_t start = i;
  while (i < s.size() && s[i] != ',' && s[i] != ']' && s[i] != ' ' &&
         s[i] != '\t')
    ++i;
  std::string tok = s.substr(start, i - start);
  if (tok == "true" || tok == "false") {
    v.kind = Value::Bool;
    v.boolean = (tok == "true");
    return v;
  }
  v.kind = Value::Num;
  bool integral = !tok.empty();
  for (std::size_t j = 0; j < tok.size(); ++j) {
    const char c = tok[j];
    if (!((c >= '0' && c <= '9') || (j == 0 && (c == '+' || c == '-')))) {
      integral = false;
      break;
    }
  }
  char* end = nullptr;
  v.num = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0')
    fail(line, "invalid value '" + tok + "'");
  if (integral) {
    v.is_int = true;
    if (tok[0] != '-') v.uint = std::strtoull(tok.c_str(), nullptr, 10);
  }
  return v;
}

using KeyMap = std::map<std::string, Value>;

KeyMap tokenize(const std::string& text) {
  KeyMap keys;
  std::istringstream stream(text);
  std::string raw;
  int line = 0;
  while (std::getline(stream, raw)) {
    ++line;
    // strip comment, respecting strings
    std::string s;
    bool instr = false;
    for (char c : raw) {
      if (c == '"') instr = !instr;
      if (c == '#' && !instr) break;
      s.push_back(c);
    }
    std::size_t i = 0;
    skip_ws(s, i);
    if (i >= s.size() || s[i] == '\r') continue;
    if (s[i] == '[') fail(line, "table headers are not supported; use dotted keys");
    std::size_t kstart = i;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
            s[i] == '-' || s[i] == '.'))
      ++i;
    std::string key = s.substr(kstart, i - kstart);
    if (key.empty()) fail(line, "expected a key");
    skip_ws(s, i);
    if (i >= s.size() || s[i] != '=') fail(line, "expected '=' after '" + key + "'");
    ++i;
    Value v = parse_value(s, i, line);
    skip_ws(s, i);
    if (i < s.size() && s[i] != '\r')
      fail(line, "trailing characters after value for '" + key + "'");
    if (!keys.emplace(key, std::move(v)).second)
      fail(line, "duplicate key '" + key + "'");
  }
  return keys;
}

std::string take_string(const Value& v, const std::string& key) {
  if (v.kind != Value::Str)
    fail(v.line, "key '" + key + "' must be a string");
  return v.str;
}

double take_number(const Value& v, const std::string& key) {
  if (v.kind != Value::Num)
    fail(v.line, "key '" + key + "' must be a number");
  return v.num;
}

std::uint64_t take_uint(const Value& v, const std::string& key) {
  if (v.kind != Value::Num || !v.is_int)
    fail(v.line, "key '" + key + "' must be a nonnegative integer");
  if (v.num < 0) fail(v.line, "key '" + key + "' must be nonnegative");
  return v.uint;
}

std::vector<double> take_number_array(const Value& v, const std::string& key) {
  if (v.kind != Value::Arr)
    fail(v.line, "key '" + key + "' must be an array");
  std::vector<double> out;
  for (const Value& e : v.arr) out.push_back(take_number(e, key));
  return out;
}

bool is_power_of_two(std::uint64_t n) { return n && (n & (n - 1)) == 0; }

}  // namespace

std::size_t RunConfig::steps() const {
  const double raw = horizon / dt;
  const auto steps = static_cast<std::size_t>(std::llround(raw));
  if (steps < 1 || std::abs(static_cast<double>(steps) * dt - horizon) > dt)
    throw ConfigError("key 'T': dt does not divide T within one dt");
  return steps;
}

RunConfig parse_config(const std::string& text) {
  KeyMap keys = tokenize(text);
  RunConfig c;

  std::vector<Value> held;
  held.reserve(keys.size());
  auto consume = [&](const char* key) -> const Value* {
    auto it = keys.find(key);
    if (it == keys.end()) return nullptr;
    held.push_back(std::move(it->second));
    keys.erase(it);
    return &held.back();
  };

  if (const Value* v = consume("model")) {
    c.model = take_string(*v, "model");
  } else {
    throw ConfigError("key 'model' is required");
  }
  if (c.model != "rigidbody" && c.model != "burgers" && c.model != "peakons" &&
      c.model != "euler2d")
    throw ConfigError("key 'model': unknown model '" + c.model + "'");

  if (const Value* v = consume("mode")) {
    c.mode = take_string(*v, "mode");
    if (c.mode != "coupled" && c.mode != "decoupled")
      fail(v->line, "key 'mode' must be \"coupled\" or \"decoupled\"");
  }
  if (const Value* v = consume("dt")) {
    c.dt = take_number(*v, "dt");
    if (!(c.dt > 0.0)) fail(v->line, "key 'dt' must be positive");
  }
  if (const Value* v = consume("T")) {
    c.horizon = take_number(*v, "T");
    if (!(c.horizon > 0.0)) fail(v->line, "key 'T' must be positive");
  }
  if (const Value* v = consume("members")) {
    const auto m = take_uint(*v, "members");
    if (m < 1) fail(v->line, "key 'members' must be >= 1");
    c.members = m;
  }
  if (const Value* v = consume("seed")) {
    c.seed = take_uint(*v, "seed");
  }
  if (const Value* v = consume("stepper")) {
    c.stepper = take_string(*v, "stepper");
    if (c.stepper != "heun" && c.stepper != "em")
      fail(v->line, "key 'stepper' must be \"heun\" or \"em\"");
  }
  if (const Value* v = consume("output_dir")) {
    c.output_dir = take_string(*v, "output_dir");
  }
  if (const Value* v = consume("output_every")) {
    const auto e = take_uint(*v, "output_every");
    if (e < 1) fail(v->line, "key 'output_every' must be >= 1");
    c.output_every = e;
  }

  if (const Value* v = consume("noise.kind")) {
    c.noise.kind = take_string(*v, "noise.kind");
    if (c.noise.kind != "constant" && c.noise.kind != "fourier")
      fail(v->line, "key 'noise.kind' must be \"constant\" or \"fourier\"");
  }
  if (const Value* v = consume("noise.nu")) {
    c.noise.nu = take_number(*v, "noise.nu");
    if (c.noise.nu < 0.0) fail(v->line, "key 'noise.nu' must be nonnegative");
  }
  if (const Value* v = consume("noise.modes")) {
    if (v->kind != Value::Arr) fail(v->line, "key 'noise.modes' must be an array");
    for (const Value& row : v->arr) {
      auto nums = take_number_array(row, "noise.modes");
      if (nums.size() != 4)
        fail(row.line, "key 'noise.modes': each entry is [kx, ky, amp, phase]");
      c.noise.modes.push_back({nums[0], nums[1], nums[2], nums[3]});
    }
  }

  if (const Value* v = consume("rigidbody.inertia")) {
    auto nums = take_number_array(*v, "rigidbody.inertia");
    if (nums.size() != 3)
      fail(v->line, "key 'rigidbody.inertia' must have 3 entries");
    for (double x : nums)
      if (!(x > 0.0)) fail(v->line, "key 'rigidbody.inertia' must be positive");
    c.rigidbody.inertia = {nums[0], nums[1], nums[2]};
  }
  if (const Value* v = consume("rigidbody.pi0")) {
    auto nums = take_number_array(*v, "rigidbody.pi0");
    if (nums.size() != 3) fail(v->line, "key 'rigidbody.pi0' must have 3 entries");
    c.rigidbody.pi0 = {nums[0], nums[1], nums[2]};
  }

  if (const Value* v = consume("burgers.n")) {
    const auto n = take_uint(*v, "burgers.n");
    if (!is_power_of_two(n) || n < 8)
      fail(v->line, "key 'burgers.n' must be a power of two >= 8");
    c.burgers.n = n;
  }
  if (const Value* v = consume("burgers.L")) {
    c.burgers.length = take_number(*v, "burgers.L");
    if (!(c.burgers.length > 0.0)) fail(v->line, "key 'burgers.L' must be positive");
  }
  if (const Value* v = consume("burgers.u0")) {
    c.burgers.u0 = take_string(*v, "burgers.u0");
  }

  if (const Value* v = consume("peakons.n")) {
    const auto n = take_uint(*v, "peakons.n");
    if (n < 1) fail(v->line, "key 'peakons.n' must be >= 1");
    c.peakons.n = n;
  }
  if (const Value* v = consume("peakons.alpha")) {
    c.peakons.alpha = take_number(*v, "peakons.alpha");
    if (!(c.peakons.alpha > 0.0))
      fail(v->line, "key 'peakons.alpha' must be positive");
  }
  if (const Value* v = consume("peakons.q0")) {
    c.peakons.q0 = take_number_array(*v, "peakons.q0");
  }
  if (const Value* v = consume("peakons.p0")) {
    c.peakons.p0 = take_number_array(*v, "peakons.p0");
  }
  if (const Value* v = consume("peakons.kernel")) {
    c.peakons.kernel = take_string(*v, "peakons.kernel");
    if (c.peakons.kernel != "line" && c.peakons.kernel != "periodic")
      fail(v->line, "key 'peakons.kernel' must be \"line\" or \"periodic\"");
  }

  if (const Value* v = consume("euler2d.n")) {
    const auto n = take_uint(*v, "euler2d.n");
    if (!is_power_of_two(n) || n < 8)
      fail(v->line, "key 'euler2d.n' must be a power of two >= 8");
    c.euler2d.n = n;
  }
  if (const Value* v = consume("euler2d.omega0")) {
    c.euler2d.omega0 = take_string(*v, "euler2d.omega0");
  }
  if (const Value* v = consume("euler2d.loop")) {
    c.euler2d.loop = take_number_array(*v, "euler2d.loop");
    if (c.euler2d.loop.size() != 4)
      fail(v->line, "key 'euler2d.loop' must be [cx, cy, radius, markers]");
    if (c.euler2d.loop[3] < 64)
      fail(v->line, "key 'euler2d.loop': need at least 64 markers");
  }

  for (const auto& [key, value] : keys)
    fail(value.line, "unknown key '" + key + "'");

  if (c.peakons.q0.size() != c.peakons.n || c.peakons.p0.size() != c.peakons.n)
    throw ConfigError("keys 'peakons.q0'/'peakons.p0' must have peakons.n entries");
  c.steps();  // validates dt vs T
  return c;
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return v > 0 ? "1e999" : (v < 0 ? "-1e999" : "nan");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "model = \"" << c.model << "\"\n";
  out << "mode = \"" << c.mode << "\"\n";
  out << "dt = " << format_double(c.dt) << "\n";
  out << "T = " << format_double(c.horizon) << "\n";
  out << "members = " << c.members << "\n";
  out << "seed = " << c.seed << "\n";
  out << "stepper = \"" << c.stepper << "\"\n";
  out << "output_dir = \"" << c.output_dir << "\"\n";
  out << "output_every = " << c.output_every << "\n";
  out << "noise.kind = \"" << c.noise.kind << "\"\n";
  out << "noise.nu = " << format_double(c.noise.nu) << "\n";
  if (!c.noise.modes.empty()) {
    out << "noise.modes = [";
    for (std::size_t i = 0; i < c.noise.modes.size(); ++i) {
      const auto& m = c.noise.modes[i];
      out << (i ? ", " : "") << "[" << format_double(m[0]) << ", "
          << format_double(m[1]) << ", " << format_double(m[2]) << ", "
          << format_double(m[3]) << "]";
    }
    out << "]\n";
  }
  auto triple = [&](const char* key, const std::array<double, 3>& a) {
    out << key << " = [" << format_double(a[0]) << ", " << format_double(a[1])
        << ", " << format_double(a[2]) << "]\n";
  };
  auto list = [&](const char* key, const std::vector<double>& a) {
    out << key << " = [";
    for (std::size_t i = 0; i < a.size(); ++i)
      out << (i ? ", " : "") << format_double(a[i]);
    out << "]\n";
  };
  if (c.model == "rigidbody") {
    triple("rigidbody.inertia", c.rigidbody.inertia);
    triple("rigidbody.pi0", c.rigidbody.pi0);
  } else if (c.model == "burgers") {
    out << "burgers.n = " << c.burgers.n << "\n";
    out << "burgers.L = " << format_double(c.burgers.length) << "\n";
    out << "burgers.u0 = \"" << c.burgers.u0 << "\"\n";
  } else if (c.model == "peakons") {
    out << "peakons.n = " << c.peakons.n << "\n";
    out << "peakons.alpha = " << format_double(c.peakons.alpha) << "\n";
    list("peakons.q0", c.peakons.q0);
    list("peakons.p0", c.peakons.p0);
    out << "peakons.kernel = \"" << c.peakons.kernel << "\"\n";
  } else if (c.model == "euler2d") {
    out << "euler2d.n = " << c.euler2d.n << "\n";
    out << "euler2d.omega0 = \"" << c.euler2d.omega0 << "\"\n";
    if (!c.euler2d.loop.empty()) list("euler2d.loop", c.euler2d.loop);
  }
  return out.str();
}

}  // namespace lasalt::io
