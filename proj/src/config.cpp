#include "monotone/config.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "monotone/error.hpp"
#include "monotone/format.hpp"

namespace monotone {

struct Config::Impl {
  toml::table table;
};

namespace {

std::string where(const toml::source_region& r) {
  return std::to_string(r.begin.line) + ":" + std::to_string(r.begin.column);
}

const toml::node* find(const toml::table& t, const std::string& path) {
  const toml::table* cur = &t;
  const std::vector<std::string> parts = split(path, '.');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const toml::node* n = cur->get(parts[i]);
    if (!n) return nullptr;
    if (i + 1 == parts.size()) return n;
    cur = n->as_table();
    if (!cur) return nullptr;
  }
  return nullptr;
}

[[noreturn]] void type_error(const std::string& source, const std::string& path, const toml::node& n,
                             const char* expected) {
  throw ParseError("config " + source + ":" + where(n.source()) + ": field '" + path + "' must be " + expected);
}

double as_number(const std::string& source, const std::string& path, const toml::node& n) {
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_integer()) return static_cast<double>(v->get());
  type_error(source, path, n, "a number");
}

Json to_json_node(const toml::node& n) {
  if (auto t = n.as_table()) {
    Json j = Json::object();
    for (auto&& [k, v] : *t) j[std::string(k.str())] = to_json_node(v);
    return j;
  }
  if (auto a = n.as_array()) {
    Json j = Json::array();
    for (auto&& v : *a) j.push_back(to_json_node(v));
    return j;
  }
  if (auto v = n.as_floating_point()) return json_number(v->get());
  if (auto v = n.as_integer()) return v->get();
  if (auto v = n.as_boolean()) return v->get();
  if (auto v = n.as_string()) return v->get();
  if (auto v = n.as_date()) return std::to_string(v->get().year) + "-" + std::to_string(v->get().month) + "-" +
                                  std::to_string(v->get().day);
  return "<time>";
}

void collect_leaves(const toml::table& t, const std::string& prefix, std::vector<std::string>& out) {
  for (auto&& [k, v] : t) {
    const std::string path = prefix.empty() ? std::string(k.str()) : prefix + "." + std::string(k.str());
    if (auto sub = v.as_table()) {
      collect_leaves(*sub, path, out);
    } else {
      out.push_back(path);
    }
  }
}

}  // namespace

Config::Config() : impl_(std::make_unique<Impl>()) {}
Config::~Config() = default;
Config::Config(const Config& o)
    : impl_(std::make_unique<Impl>(*o.impl_)), source_(o.source_), used_(o.used_), resolved_(o.resolved_) {}
Config& Config::operator=(const Config& o) {
  if (this != &o) {
    impl_ = std::make_unique<Impl>(*o.impl_);
    source_ = o.source_;
    used_ = o.used_;
    resolved_ = o.resolved_;
  }
  return *this;
}

Config Config::parse_file(const std::string& path) {
  Config c;
  c.source_ = path;
  try {
    c.impl_->table = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    throw ParseError("config " + path + ":" + where(e.source()) + ": " + std::string(e.description()));
  }
  return c;
}

Config Config::parse_string(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  try {
    c.impl_->table = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ParseError("config " + source + ":" + where(e.source()) + ": " + std::string(e.description()));
  }
  return c;
}

void Config::set_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError("override '" + assignment + "' is not of the form key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string text = trim(assignment.substr(eq + 1));
  const std::vector<std::string> parts = split(key, '.');
  if (key.empty() || parts.empty()) throw ParseError("override '" + assignment + "' has an empty key");
  for (const std::string& p : parts) {
    if (p.empty()) throw ParseError("override key '" + key + "' has an empty segment");
  }
  toml::table parsed;
  try {
    parsed = toml::parse("v = " + text);
  } catch (const toml::parse_error&) {
    parsed = toml::table{{"v", text}};
  }
  toml::table* cur = &impl_->table;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    toml::node* n = cur->get(parts[i]);
    if (!n) {
      cur->insert(parts[i], toml::table{});
      n = cur->get(parts[i]);
    }
    cur = n->as_table();
    if (!cur) throw ParseError("override key '" + key + "': '" + parts[i] + "' is not a table");
  }
  cur->insert_or_assign(parts.back(), *parsed.get("v"));
}

bool Config::has(const std::string& path) const { return find(impl_->table, path) != nullptr; }

void Config::record(const std::string& path, const Json& value) const {
  used_.insert(path);
  if (!resolved_.contains(path)) resolved_[path] = value;
}

double Config::get_double(const std::string& path) const {
  const toml::node* n = find(impl_->table, path);
  if (!n) throw ParseError("config " + source_ + ": missing required field '" + path + "'");
  const double v = as_number(source_, path, *n);
  record(path, json_number(v));
  return v;
}

double Config::get_double(const std::string& path, double fallback) const {
  if (!has(path)) {
    record(path, json_number(fallback));
    return fallback;
  }
  return get_double(path);
}

int Config::get_int(const std::string& path) const {
  const toml::node* n = find(impl_->table, path);
  if (!n) throw ParseError("config " + source_ + ": missing required field '" + path + "'");
  auto v = n->as_integer();
  if (!v) type_error(source_, path, *n, "an integer");
  record(path, v->get());
  return static_cast<int>(v->get());
}

int Config::get_int(const std::string& path, int fallback) const {
  if (!has(path)) {
    record(path, fallback);
    return fallback;
  }
  return get_int(path);
}

bool Config::get_bool(const std::string& path, bool fallback) const {
  const toml::node* n = find(impl_->table, path);
  if (!n) {
    record(path, fallback);
    return fallback;
  }
  auto v = n->as_boolean();
  if (!v) type_error(source_, path, *n, "true or false");
  record(path, v->get());
  return v->get();
}

std::string Config::get_string(const std::string& path) const {
  const toml::node* n = find(impl_->table, path);
  if (!n) throw ParseError("config " + source_ + ": missing required field '" + path + "'");
  auto v = n->as_string();
  if (!v) type_error(source_, path, *n, "a string");
  record(path, v->get());
  return v->get();
}

std::string Config::get_string(const std::string& path, const std::string& fallback) const {
  if (!has(path)) {
    record(path, fallback);
    return fallback;
  }
  return get_string(path);
}

std::vector<double> Config::get_doubles(const std::string& path) const {
  const toml::node* n = find(impl_->table, path);
  if (!n) throw ParseError("config " + source_ + ": missing required field '" + path + "'");
  std::vector<double> out;
  if (auto a = n->as_array()) {
    for (auto&& v : *a) out.push_back(as_number(source_, path, v));
  } else {
    out.push_back(as_number(source_, path, *n));
  }
  Json j = Json::array();
  for (double v : out) j.push_back(json_number(v));
  record(path, j);
  return out;
}

std::vector<double> Config::get_doubles(const std::string& path, const std::vector<double>& fallback) const {
  if (!has(path)) {
    Json j = Json::array();
    for (double v : fallback) j.push_back(json_number(v));
    record(path, j);
    return fallback;
  }
  return get_doubles(path);
}

std::vector<std::string> Config::get_strings(const std::string& path,
                                             const std::vector<std::string>& fallback) const {
  const toml::node* n = find(impl_->table, path);
  std::vector<std::string> out;
  if (!n) {
    out = fallback;
  } else if (auto a = n->as_array()) {
    for (auto&& v : *a) {
      auto s = v.as_string();
      if (!s) type_error(source_, path, v, "a list of strings");
      out.push_back(s->get());
    }
  } else if (auto s = n->as_string()) {
    out.push_back(s->get());
  } else {
    type_error(source_, path, *n, "a string or a list of strings");
  }
  record(path, out);
  return out;
}

std::map<std::string, double> Config::get_number_table(const std::string& path) const {
  std::map<std::string, double> out;
  const toml::node* n = find(impl_->table, path);
  if (n) {
    auto t = n->as_table();
    if (!t) type_error(source_, path, *n, "a table");
    for (auto&& [k, v] : *t) {
      const std::string key(k.str());
      out[key] = as_number(source_, path + "." + key, v);
      used_.insert(path + "." + key);
    }
  }
  Json j = Json::object();
  for (const auto& [k, v] : out) j[k] = json_number(v);
  record(path, j);
  return out;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> leaves, out;
  collect_leaves(impl_->table, "", leaves);
  for (const std::string& k : leaves) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

void Config::require_all_used() const {
  const std::vector<std::string> extra = unused_keys();
  if (extra.empty()) return;
  std::string msg = "config " + source_ + ": unknown or unused field";
  msg += extra.size() > 1 ? "s " : " ";
  for (std::size_t i = 0; i < extra.size(); ++i) msg += (i ? ", '" : "'") + extra[i] + "'";
  throw ParseError(msg);
}

Json Config::echo() const { return to_json_node(impl_->table); }

}  // namespace monotone
