//
// Copyright 2026 The Urania Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "urania/llm/client.hpp"

#include <nlohmann/json.hpp>

#include "urania/text.hpp"

namespace urania::llm {

using nlohmann::json;

void ProviderConfig::validate() const {
  if (endpoint_url.empty()) throw ConfigError("provider: endpoint_url is required");
  if (max_retries < 0) throw ConfigError("provider: max_retries must be >= 0");
  if (timeout_ms <= 0) throw ConfigError("provider: timeout must be positive");
  if (max_output_tokens <= 0) throw ConfigError("provider: max_output_tokens must be positive");
  if (temperature < 0.0) throw ConfigError("provider: temperature must be >= 0");
}

std::string complete_template(LlmClient& client, TemplateId id,
                              const std::map<std::string, std::string>& bindings,
                              int max_output_tokens) {
  CompletionRequest req;
  req.rendered_prompt = render(id, bindings);
  req.max_output_tokens = max_output_tokens;
  req.template_name = template_for(id).name;
  req.bindings = bindings;
  return client.complete(req);
}

std::string parse_tagged(const std::string& text, const std::string& tag) {
  std::string open = "<" + tag + ">";
  std::string close = "</" + tag + ">";
  auto begin = text.find(open);
  if (begin == std::string::npos) {
    throw ParseError("no <" + tag + "> tag in model output", text);
  }
  begin += open.size();
  auto end = text.find(close, begin);
  if (end == std::string::npos) {
    throw ParseError("unterminated <" + tag + "> tag in model output", text);
  }
  return trim(text.substr(begin, end - begin));
}

namespace {

std::string strip_code_fences(const std::string& text) {
  std::string s = trim(text);
  if (s.rfind("```", 0) != 0) return s;
  auto first_newline = s.find('\n');
  if (first_newline == std::string::npos) return s;
  auto closing = s.rfind("```");
  if (closing <= first_newline) return s;
  return trim(s.substr(first_newline + 1, closing - first_newline - 1));
}

// Best-effort conversion of Python-ish literals (single quotes, trailing
// commas) to strict JSON. Quotes inside double-quoted strings are left
// alone.
std::string pythonish_to_json(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool in_double = false;
  bool in_single = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_double) {
      out.push_back(c);
      if (c == '\\' && i + 1 < s.size()) {
        out.push_back(s[++i]);
      } else if (c == '"') {
        in_double = false;
      }
      continue;
    }
    if (in_single) {
      if (c == '\\' && i + 1 < s.size()) {
        out.push_back(c);
        out.push_back(s[++i]);
      } else if (c == '\'') {
        out.push_back('"');
        in_single = false;
      } else if (c == '"') {
        out += "\\\"";
      } else {
        out.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_double = true;
      out.push_back(c);
    } else if (c == '\'' || c == '`') {
      in_single = true;
      out.push_back('"');
    } else if (c == ',') {
      // Drop trailing commas before ] or }.
      std::size_t j = i + 1;
      while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && (s[j] == ']' || s[j] == '}')) continue;
      out.push_back(c);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

json try_parse(const std::string& s) { return json::parse(s, nullptr, false); }

}  // namespace

json parse_json_block(const std::string& text) {
  std::string s = strip_code_fences(text);

  json v = try_parse(s);
  if (!v.is_discarded() && (v.is_object() || v.is_array())) return v;

  // Fall back to the first {...} or [...] span.
  auto first_obj = s.find('{');
  auto first_arr = s.find('[');
  std::size_t start = std::min(first_obj, first_arr);
  if (start != std::string::npos) {
    char open = s[start];
    char close = (open == '{') ? '}' : ']';
    int depth = 0;
    bool quoted = false;
    for (std::size_t i = start; i < s.size(); ++i) {
      char c = s[i];
      if (quoted) {
        if (c == '\\')
          ++i;
        else if (c == '"')
          quoted = false;
        continue;
      }
      if (c == '"') {
        quoted = true;
      } else if (c == open) {
        ++depth;
      } else if (c == close) {
        if (--depth == 0) {
          std::string span = s.substr(start, i - start + 1);
          v = try_parse(span);
          if (!v.is_discarded()) return v;
          v = try_parse(pythonish_to_json(span));
          if (!v.is_discarded()) return v;
          break;
        }
      }
    }
  }

  v = try_parse(pythonish_to_json(s));
  if (!v.is_discarded() && (v.is_object() || v.is_array())) return v;

  throw ParseError("model output is not a JSON object or array", text);
}

std::vector<std::string> parse_string_list(const std::string& text) {
  json v = parse_json_block(text);
  if (v.is_object()) {
    // Accept {"keywords": [...]} and friends: take the first array value.
    for (auto& [_, value] : v.items()) {
      if (value.is_array()) {
        v = value;
        break;
      }
    }
  }
  if (!v.is_array()) {
    throw ParseError("model output does not contain a list", text);
  }
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (item.is_string()) {
      out.push_back(item.get<std::string>());
    } else if (item.is_number() || item.is_boolean()) {
      out.push_back(item.dump());
    }
  }
  return out;
}

}  // namespace urania::llm
