//
// retrochem - retrosynthesis evaluation and instruction-data toolkit
// SPDX-License-Identifier: Apache-2.0
//

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "retrochem/harness/sampler.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include "retrochem/util/io.h"
#include "retrochem/util/log.h"

namespace retrochem {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

struct Target {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Target split_url(const std::string &url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos
      || (url.compare(0, scheme, "http") != 0
          && url.compare(0, scheme, "https") != 0))
    throw ConfigError("endpoint url must start with http:// or https://");
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos)
    return { url, "/" };
  return { url.substr(0, slash), url.substr(slash) };
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Shortest form that reads back to the same double.
  for (int precision = 1; precision <= 17; ++precision) {
    char shorter[64];
    std::snprintf(shorter, sizeof shorter, "%.*g", precision, v);
    if (std::strtod(shorter, nullptr) == v)
      return shorter;
  }
  return buf;
}

void replace_all(std::string &text, std::string_view from,
                 const std::string &to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size()
         && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
              return std::tolower(static_cast<unsigned char>(x))
                     == std::tolower(static_cast<unsigned char>(y));
            });
}

enum class Outcome {
  kOk,
  kTransient,
  kPermanent,
};

struct Attempt {
  Outcome outcome = Outcome::kOk;
  std::vector<std::string> samples;
  std::string message;
};

class Client {
public:
  explicit Client(const EndpointConfig &endpoint)
      : endpoint_(endpoint), target_(split_url(endpoint.url)),
        http_(target_.origin) {
    const auto seconds = static_cast<time_t>(endpoint.timeout_s);
    const auto micros = static_cast<time_t>(
        (endpoint.timeout_s - static_cast<double>(seconds)) * 1e6);
    http_.set_connection_timeout(seconds, micros);
    http_.set_read_timeout(seconds, micros);
    http_.set_write_timeout(seconds, micros);
    for (const auto &[key, value]: endpoint.headers) {
      if (iequals(key, "Content-Type"))
        content_type_ = value;
      else
        headers_.emplace(key, value);
    }
    if (const char *key = std::getenv(endpoint.api_key_env.c_str());
        key != nullptr && *key != '\0')
      headers_.emplace(endpoint.api_key_header,
                       endpoint.api_key_prefix + key);
  }

  Attempt post(const std::string &body) {
    Attempt a;
    httplib::Result res = http_.Post(target_.path, headers_, body,
                                     content_type_);
    if (!res) {
      a.outcome = Outcome::kTransient;
      a.message = "request failed: " + httplib::to_string(res.error());
      return a;
    }
    if (res->status == 429 || res->status >= 500) {
      a.outcome = Outcome::kTransient;
      a.message = "HTTP " + std::to_string(res->status);
      return a;
    }
    if (res->status < 200 || res->status >= 300) {
      a.outcome = Outcome::kPermanent;
      a.message = "HTTP " + std::to_string(res->status);
      return a;
    }
    Json parsed = Json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
      a.outcome = Outcome::kTransient;
      a.message = "response body is not JSON";
      return a;
    }
    try {
      a.samples = extract_samples(parsed, endpoint_.response_path);
    } catch (const EndpointError &e) {
      a.outcome = Outcome::kPermanent;
      a.message = e.what();
      return a;
    }
    if (a.samples.empty()) {
      a.outcome = Outcome::kTransient;
      a.message = "response held no samples";
    }
    return a;
  }

private:
  const EndpointConfig &endpoint_;
  Target target_;
  httplib::Client http_;
  httplib::Headers headers_;
  std::string content_type_ = "application/json";
};

void collect(const Json &node, std::span<const std::string> parts,
             std::vector<std::string> &out, bool &found) {
  if (parts.empty()) {
    if (node.is_string()) {
      out.push_back(node.get<std::string>());
      found = true;
    } else if (node.is_array()) {
      found = true;
      for (const Json &item: node) {
        if (!item.is_string())
          throw EndpointError("response path leads to a non-string value");
        out.push_back(item.get<std::string>());
      }
    } else {
      throw EndpointError("response path leads to a non-string value");
    }
    return;
  }
  const std::string &part = parts.front();
  if (part == "*") {
    if (!node.is_array())
      return;
    for (const Json &item: node)
      collect(item, parts.subspan(1), out, found);
    return;
  }
  if (node.is_array() && !part.empty()
      && std::all_of(part.begin(), part.end(), ::isdigit)) {
    const std::size_t index = std::stoul(part);
    if (index < node.size())
      collect(node[index], parts.subspan(1), out, found);
    return;
  }
  if (node.is_object()) {
    const auto it = node.find(part);
    if (it != node.end())
      collect(*it, parts.subspan(1), out, found);
  }
}

}  // namespace

std::vector<PromptItem> parse_prompts(std::string_view text) {
  std::vector<PromptItem> out;
  std::set<std::string> ids;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.find_first_not_of(" \t") == std::string_view::npos)
      return;
    const std::string where = "prompts line " + std::to_string(line_no);
    OrderedJson j = OrderedJson::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw std::invalid_argument(where + ": not a JSON object");
    PromptItem item;
    const auto id = j.find("id");
    if (id == j.end() || !(id->is_string() || id->is_number_integer()))
      throw std::invalid_argument(where + ": missing string or integer 'id'");
    item.id = id->is_string() ? id->get<std::string>() : id->dump();
    const auto prompt = j.find("prompt");
    if (prompt == j.end() || !prompt->is_string())
      throw std::invalid_argument(where + ": missing string 'prompt'");
    item.prompt = prompt->get<std::string>();
    if (!ids.insert(item.id).second)
      throw std::invalid_argument(where + ": duplicate id " + item.id);
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() != "id" && it.key() != "prompt" && it.key() != "samples")
        item.passthrough[it.key()] = it.value();
    }
    out.push_back(std::move(item));
  });
  return out;
}

std::string build_request(const EndpointConfig &endpoint,
                          std::string_view prompt, int n) {
  std::string body = endpoint.request_template;
  replace_all(body, "{prompt}", Json(std::string(prompt)).dump());
  replace_all(body, "{n}", std::to_string(n));
  replace_all(body, "{temperature}", format_number(endpoint.temperature));
  replace_all(body, "{max_tokens}", std::to_string(endpoint.max_tokens));
  return body;
}

std::vector<std::string> extract_samples(const Json &body,
                                         std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t end = path.find('.', start);
    if (end == std::string_view::npos)
      end = path.size();
    parts.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  if (path.empty())
    parts.clear();
  std::vector<std::string> out;
  bool found = false;
  collect(body, parts, out, found);
  if (!found)
    throw EndpointError("response path '" + std::string(path)
                        + "' not found in response");
  return out;
}

SampleRun sample_prompts(const EndpointConfig &endpoint,
                         std::span<const PromptItem> prompts) {
  SampleRun run;
  run.samples.resize(prompts.size());
  if (prompts.empty())
    return run;
  split_url(endpoint.url);  // fail fast on a bad url

  std::atomic<std::size_t> next { 0 };
  std::atomic<bool> abort { false };
  std::atomic<std::size_t> requests { 0 }, retries { 0 };
  std::atomic<std::size_t> in_flight { 0 }, max_seen { 0 };
  std::mutex error_mutex;
  std::optional<std::string> first_error;

  auto fail = [&](std::string message) {
    std::lock_guard lock(error_mutex);
    if (!first_error)
      first_error = std::move(message);
    abort = true;
  };

  auto worker = [&]() {
    Client client(endpoint);
    while (!abort) {
      const std::size_t i = next++;
      if (i >= prompts.size())
        return;
      std::vector<std::string> got;
      const auto want = static_cast<std::size_t>(endpoint.n_samples);
      while (got.size() < want) {
        const std::string body = build_request(
            endpoint, prompts[i].prompt, static_cast<int>(want - got.size()));
        Attempt a;
        for (int attempt = 0;; ++attempt) {
          if (abort)
            return;
          const std::size_t now = ++in_flight;
          std::size_t seen = max_seen.load();
          while (now > seen && !max_seen.compare_exchange_weak(seen, now)) { }
          ++requests;
          a = client.post(body);
          --in_flight;
          if (a.outcome == Outcome::kOk)
            break;
          if (a.outcome == Outcome::kPermanent
              || attempt >= endpoint.max_retries) {
            fail("prompt " + prompts[i].id + ": " + a.message);
            return;
          }
          ++retries;
          logger().warn("prompt {}: {}; retry {} of {}", prompts[i].id,
                        a.message, attempt + 1, endpoint.max_retries);
          const long long delay = std::min<long long>(
              static_cast<long long>(endpoint.backoff_ms) << std::min(attempt, 20),
              30000);
          std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        for (std::string &s: a.samples) {
          if (got.size() < want)
            got.push_back(std::move(s));
        }
      }
      run.samples[i] = std::move(got);
    }
  };

  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(endpoint.max_in_flight), prompts.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back(worker);
  for (std::thread &t: pool)
    t.join();

  run.stats.requests = requests;
  run.stats.retries = retries;
  run.stats.max_in_flight_seen = max_seen;
  run.error = first_error;
  return run;
}

std::string render_predictions(std::span<const PromptItem> prompts,
                               const SampleRun &run) {
  std::string out;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    if (!run.samples[i])
      continue;
    OrderedJson j;
    j["id"] = prompts[i].id;
    for (auto it = prompts[i].passthrough.begin();
         it != prompts[i].passthrough.end(); ++it)
      j[it.key()] = it.value();
    j["samples"] = *run.samples[i];
    out += j.dump(-1, ' ', false, OrderedJson::error_handler_t::replace) + '\n';
  }
  return out;
}

}  // namespace retrochem
