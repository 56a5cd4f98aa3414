#include "vfdr/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include <toml++/toml.hpp>

#include "vfdr/error.hpp"

namespace vfdr::config {

namespace {

constexpr const char* kModule = "config";

[[noreturn]] void fail(std::string_view source, std::string_view key, const std::string& what) {
  throw Error(ErrorKind::InvalidConfig, kModule, std::string(source) + ": '" + std::string(key) + "' " + what);
}

double number(const toml::node& node, std::string_view source, std::string_view key) {
  if (auto v = node.value<double>()) return *v;
  fail(source, key, "must be a number");
}

template <typename T>
T integer(const toml::node& node, std::string_view source, std::string_view key, std::int64_t min) {
  const auto v = node.value<std::int64_t>();
  if (!v || !node.is_integer()) fail(source, key, "must be an integer");
  if (*v < min) fail(source, key, "must be at least " + std::to_string(min));
  return static_cast<T>(*v);
}

// A scalar or an array of scalars, each converted by `one`.
template <typename T, typename F>
std::vector<T> list(const toml::node& node, F one) {
  std::vector<T> out;
  if (const auto* arr = node.as_array()) {
    for (const auto& item : *arr) out.push_back(one(item));
  } else {
    out.push_back(one(node));
  }
  return out;
}

std::string text_of(const toml::node& node, std::string_view source, std::string_view key) {
  if (auto s = node.value<std::string>()) return *s;
  fail(source, key, "must be a string");
}

}  // namespace

simulate::StudyConfig parse_study_config(std::string_view text, std::string_view source) {
  toml::table table;
  try {
    table = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ": " << e.description();
    throw Error(ErrorKind::InvalidConfig, kModule, msg.str());
  }

  simulate::StudyConfig cfg;
  using Setter = std::function<void(const toml::node&, std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters{
      {"m", [&](const toml::node& n, std::string_view k) { cfg.m = integer<std::size_t>(n, source, k, 1); }},
      {"fracAlt", [&](const toml::node& n, std::string_view k) { cfg.frac_alt = number(n, source, k); }},
      {"muA", [&](const toml::node& n, std::string_view k) { cfg.mu_alt = number(n, source, k); }},
      {"rho",
       [&](const toml::node& n, std::string_view k) {
         cfg.rhos = list<double>(n, [&](const toml::node& x) { return number(x, source, k); });
       }},
      {"reps", [&](const toml::node& n, std::string_view k) { cfg.reps = integer<std::size_t>(n, source, k, 1); }},
      {"schemes",
       [&](const toml::node& n, std::string_view k) {
         cfg.schemes = list<OrderingScheme>(n, [&](const toml::node& x) {
           const auto name = text_of(x, source, k);
           const auto s = parse_scheme(name);
           if (!s) {
             throw Error(ErrorKind::UnsupportedScheme, kModule, std::string(source) + ": unknown scheme '" + name + "'");
           }
           return *s;
         });
       }},
      {"method",
       [&](const toml::node& n, std::string_view k) {
         cfg.methods = list<simulate::Method>(n, [&](const toml::node& x) {
           const auto name = text_of(x, source, k);
           const auto m = simulate::parse_method(name);
           if (!m) fail(source, k, "has unknown method '" + name + "'");
           return *m;
         });
       }},
      {"alpha", [&](const toml::node& n, std::string_view k) { cfg.alpha = number(n, source, k); }},
      {"cutoff", [&](const toml::node& n, std::string_view k) { cfg.fdr_cutoff = number(n, source, k); }},
      {"null-J", [&](const toml::node& n, std::string_view k) { cfg.null_components = integer<int>(n, source, k, 0); }},
      {"null-P", [&](const toml::node& n, std::string_view k) { cfg.null_penalty = number(n, source, k); }},
      {"seed", [&](const toml::node& n, std::string_view k) { cfg.seed = integer<std::uint64_t>(n, source, k, 0); }},
      {"dims", [&](const toml::node& n, std::string_view k) { cfg.dims = integer<int>(n, source, k, 0); }},
      {"mixedNullFrac", [&](const toml::node& n, std::string_view k) { cfg.mixed_frac = number(n, source, k); }},
      {"pvalueConvention",
       [&](const toml::node& n, std::string_view k) {
         const auto name = text_of(n, source, k);
         const auto c = simulate::parse_convention(name);
         if (!c) fail(source, k, "has unknown convention '" + name + "'");
         cfg.convention = *c;
       }},
      {"threads", [&](const toml::node& n, std::string_view k) { cfg.threads = integer<unsigned>(n, source, k, 0); }},
  };

  for (const auto& [key, node] : table) {
    const auto it = setters.find(key.str());
    if (it == setters.end()) fail(source, key.str(), "is not a recognised key");
    it->second(node, key.str());
  }
  simulate::validate(cfg);
  return cfg;
}

simulate::StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidConfig, kModule, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_study_config(buf.str(), path.string());
}

}  // namespace vfdr::config
