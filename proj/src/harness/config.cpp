//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#include "retrochem/harness/config.h"

#include <charconv>
#include <set>

#include <json.hpp>
#include <toml.hpp>

#include "retrochem/util/io.h"

namespace retrochem {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void check_keys(const toml::table &table, const std::string &where,
                std::initializer_list<const char *> allowed) {
  const std::set<std::string_view> ok(allowed.begin(), allowed.end());
  for (const auto &[key, node]: table) {
    if (!ok.count(key.str()))
      throw ConfigError(where + ": unknown key '" + std::string(key.str())
                        + "'");
  }
}

template <class T>
std::optional<T> get(const toml::table &table, const char *key,
                     const std::string &where) {
  const toml::node *node = table.get(key);
  if (node == nullptr)
    return std::nullopt;
  if constexpr (std::is_same_v<T, double>) {
    // Integers are accepted where reals are expected.
    if (auto v = node->value<double>())
      return *v;
  } else if (auto v = node->value_exact<T>()) {
    return *v;
  }
  throw ConfigError(where + ": wrong type for '" + key + "'");
}

std::int64_t get_int(const toml::table &table, const char *key,
                     const std::string &where, std::int64_t fallback,
                     std::int64_t min_value) {
  const std::int64_t v
      = get<std::int64_t>(table, key, where).value_or(fallback);
  if (v < min_value)
    throw ConfigError(where + ": '" + key + "' must be at least "
                      + std::to_string(min_value));
  return v;
}

fs::path resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_relative() ? base / path : path;
}

std::vector<std::string> string_array(const toml::table &table,
                                      const char *key,
                                      const std::string &where) {
  std::vector<std::string> out;
  const toml::node *node = table.get(key);
  if (node == nullptr)
    return out;
  const toml::array *arr = node->as_array();
  if (arr == nullptr)
    throw ConfigError(where + ": '" + key + "' must be an array of strings");
  for (const toml::node &item: *arr) {
    auto s = item.value_exact<std::string>();
    if (!s)
      throw ConfigError(where + ": '" + key + "' must be an array of strings");
    out.push_back(*s);
  }
  return out;
}

const toml::table *subtable(const toml::table &root, const char *key) {
  const toml::node *node = root.get(key);
  if (node == nullptr)
    return nullptr;
  if (const toml::table *t = node->as_table())
    return t;
  throw ConfigError(std::string("config: '") + key + "' must be a table");
}

}  // namespace

std::vector<std::size_t> parse_k_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view piece = text.substr(start, end - start);
    while (!piece.empty() && piece.front() == ' ')
      piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ')
      piece.remove_suffix(1);
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(piece.data(),
                                         piece.data() + piece.size(), v);
    if (piece.empty() || ec != std::errc() || p != piece.data() + piece.size()
        || v == 0)
      throw ConfigError("k values must be positive integers, got '"
                        + std::string(text) + "'");
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

void RunConfig::validate() const {
  if (k.empty())
    throw ConfigError("config: at least one k value is required");
  for (std::size_t v: k) {
    if (v == 0)
      throw ConfigError("config: k values must be positive");
  }
  if (predictions_file && predictions_from_endpoint)
    throw ConfigError("config: give either a predictions file or an "
                      "endpoint, not both");
  if (threads == 0)
    throw ConfigError("config: threads must be positive");
  if (endpoint.n_samples < 1 || endpoint.max_in_flight < 1
      || endpoint.max_retries < 0 || endpoint.max_tokens < 1
      || endpoint.timeout_s <= 0 || endpoint.backoff_ms < 0)
    throw ConfigError("config: endpoint limits out of range");
  if (instruct.augment < 1)
    throw ConfigError("config: instruct.augment must be at least 1");
  if (instruct.design_rate < 0.0 || instruct.design_rate > 1.0)
    throw ConfigError("config: instruct.design_rate must lie in [0, 1]");
  if (vocab.merges < 0)
    throw ConfigError("config: vocab.merges must not be negative");
  if (fingerprint.radius < 0 || fingerprint.n_bits < 1 || fingerprint.knn < 1)
    throw ConfigError("config: fingerprint parameters out of range");
}

std::string RunConfig::canonical_json() const {
  auto paths = [](const std::vector<fs::path> &v) {
    Json a = Json::array();
    for (const fs::path &p: v)
      a.push_back(p.generic_string());
    return a;
  };
  auto opt_path = [](const std::optional<fs::path> &p) {
    return p ? Json(p->generic_string()) : Json(nullptr);
  };
  Json j;
  j["seed"] = seed;
  j["out"] = out.generic_string();
  j["stereo"] = std::string(to_string(stereo));
  j["k"] = k;
  Json m = Json::array();
  for (Metric metric: metrics)
    m.push_back(std::string(to_string(metric)));
  j["metrics"] = m;
  j["threads"] = threads;
  j["datasets"] = paths(datasets);
  j["predictions"] = { { "file", opt_path(predictions_file) },
                       { "endpoint", predictions_from_endpoint },
                       { "prompts", opt_path(prompts_file) } };
  Json headers = Json::object();
  for (const auto &[k2, v]: endpoint.headers)
    headers[k2] = v;
  j["endpoint"] = { { "url", endpoint.url },
                    { "headers", headers },
                    { "request_template", endpoint.request_template },
                    { "response_path", endpoint.response_path },
                    { "n_samples", endpoint.n_samples },
                    { "temperature", endpoint.temperature },
                    { "max_tokens", endpoint.max_tokens },
                    { "timeout_s", endpoint.timeout_s },
                    { "max_retries", endpoint.max_retries },
                    { "max_in_flight", endpoint.max_in_flight },
                    { "backoff_ms", endpoint.backoff_ms },
                    { "api_key_env", endpoint.api_key_env },
                    { "api_key_header", endpoint.api_key_header } };
  j["instruct"] = { { "catalog", opt_path(instruct.catalog) },
                    { "meta", paths(instruct.meta) },
                    { "augment", instruct.augment },
                    { "design_rate", instruct.design_rate },
                    { "tasks", instruct.tasks } };
  j["vocab"] = { { "input", opt_path(vocab.input) },
                 { "base", opt_path(vocab.base) },
                 { "merges", vocab.merges },
                 { "min_frequency", vocab.min_frequency } };
  j["fingerprint"] = { { "radius", fingerprint.radius },
                       { "n_bits", fingerprint.n_bits },
                       { "knn", fingerprint.knn } };
  return j.dump();
}

RunConfig parse_config(std::string_view text, const fs::path &base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(root, "config",
             { "seed", "out", "stereo", "k", "metrics", "threads", "datasets",
               "predictions", "endpoint", "instruct", "vocab",
               "fingerprint" });
  RunConfig c;
  c.seed = static_cast<std::uint64_t>(get_int(root, "seed", "config", 0, 0));
  if (auto out = get<std::string>(root, "out", "config"))
    c.out = resolve(base_dir, *out);
  if (auto stereo = get<std::string>(root, "stereo", "config")) {
    try {
      c.stereo = parse_stereo_mode(*stereo);
    } catch (const MetricError &e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (const toml::node *node = root.get("k")) {
    const toml::array *arr = node->as_array();
    if (arr == nullptr)
      throw ConfigError("config: 'k' must be an array of integers");
    c.k.clear();
    for (const toml::node &item: *arr) {
      auto v = item.value_exact<std::int64_t>();
      if (!v || *v <= 0)
        throw ConfigError("config: k values must be positive integers");
      c.k.push_back(static_cast<std::size_t>(*v));
    }
  }
  if (root.get("metrics")) {
    c.metrics.clear();
    for (const std::string &name: string_array(root, "metrics", "config")) {
      try {
        c.metrics.push_back(parse_metric(name));
      } catch (const MetricError &e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    }
  }
  c.threads = static_cast<unsigned>(get_int(root, "threads", "config", 1, 1));
  for (const std::string &p: string_array(root, "datasets", "config"))
    c.datasets.push_back(resolve(base_dir, p));

  if (const toml::table *t = subtable(root, "predictions")) {
    check_keys(*t, "[predictions]", { "file", "endpoint", "prompts" });
    if (auto f = get<std::string>(*t, "file", "[predictions]"))
      c.predictions_file = resolve(base_dir, *f);
    c.predictions_from_endpoint
        = get<bool>(*t, "endpoint", "[predictions]").value_or(false);
    if (auto f = get<std::string>(*t, "prompts", "[predictions]"))
      c.prompts_file = resolve(base_dir, *f);
  }
  if (const toml::table *t = subtable(root, "endpoint")) {
    const std::string w = "[endpoint]";
    check_keys(*t, w,
               { "url", "headers", "request_template", "response_path",
                 "n_samples", "temperature", "max_tokens", "timeout_s",
                 "max_retries", "max_in_flight", "backoff_ms", "api_key_env",
                 "api_key_header", "api_key_prefix" });
    EndpointConfig &e = c.endpoint;
    e.url = get<std::string>(*t, "url", w).value_or("");
    if (const toml::table *h = subtable(*t, "headers")) {
      for (const auto &[key, node]: *h) {
        auto v = node.value_exact<std::string>();
        if (!v)
          throw ConfigError(w + ": header values must be strings");
        e.headers[std::string(key.str())] = *v;
      }
    }
    e.request_template
        = get<std::string>(*t, "request_template", w).value_or(e.request_template);
    e.response_path
        = get<std::string>(*t, "response_path", w).value_or(e.response_path);
    e.n_samples = static_cast<int>(get_int(*t, "n_samples", w, e.n_samples, 1));
    e.temperature = get<double>(*t, "temperature", w).value_or(e.temperature);
    e.max_tokens
        = static_cast<int>(get_int(*t, "max_tokens", w, e.max_tokens, 1));
    e.timeout_s = get<double>(*t, "timeout_s", w).value_or(e.timeout_s);
    e.max_retries
        = static_cast<int>(get_int(*t, "max_retries", w, e.max_retries, 0));
    e.max_in_flight
        = static_cast<int>(get_int(*t, "max_in_flight", w, e.max_in_flight, 1));
    e.backoff_ms
        = static_cast<int>(get_int(*t, "backoff_ms", w, e.backoff_ms, 0));
    e.api_key_env = get<std::string>(*t, "api_key_env", w).value_or(e.api_key_env);
    e.api_key_header
        = get<std::string>(*t, "api_key_header", w).value_or(e.api_key_header);
    e.api_key_prefix
        = get<std::string>(*t, "api_key_prefix", w).value_or(e.api_key_prefix);
  }
  if (const toml::table *t = subtable(root, "instruct")) {
    const std::string w = "[instruct]";
    check_keys(*t, w, { "catalog", "meta", "augment", "design_rate", "tasks" });
    if (auto p = get<std::string>(*t, "catalog", w))
      c.instruct.catalog = resolve(base_dir, *p);
    for (const std::string &p: string_array(*t, "meta", w))
      c.instruct.meta.push_back(resolve(base_dir, p));
    c.instruct.augment = static_cast<int>(get_int(*t, "augment", w, 1, 1));
    c.instruct.design_rate
        = get<double>(*t, "design_rate", w).value_or(c.instruct.design_rate);
    if (t->get("tasks"))
      c.instruct.tasks = string_array(*t, "tasks", w);
  }
  if (const toml::table *t = subtable(root, "vocab")) {
    const std::string w = "[vocab]";
    check_keys(*t, w, { "input", "base", "merges", "min_frequency" });
    if (auto p = get<std::string>(*t, "input", w))
      c.vocab.input = resolve(base_dir, *p);
    if (auto p = get<std::string>(*t, "base", w))
      c.vocab.base = resolve(base_dir, *p);
    c.vocab.merges = get_int(*t, "merges", w, c.vocab.merges, 0);
    c.vocab.min_frequency
        = get_int(*t, "min_frequency", w, c.vocab.min_frequency, 1);
  }
  if (const toml::table *t = subtable(root, "fingerprint")) {
    const std::string w = "[fingerprint]";
    check_keys(*t, w, { "radius", "n_bits", "knn" });
    c.fingerprint.radius
        = static_cast<int>(get_int(*t, "radius", w, c.fingerprint.radius, 0));
    c.fingerprint.n_bits
        = static_cast<int>(get_int(*t, "n_bits", w, c.fingerprint.n_bits, 1));
    c.fingerprint.knn
        = static_cast<int>(get_int(*t, "knn", w, c.fingerprint.knn, 1));
  }
  c.validate();
  return c;
}

RunConfig load_config(const fs::path &path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError &e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path());
}

}  // namespace retrochem
