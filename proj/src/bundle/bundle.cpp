// SPDX-License-Identifier: Apache-2.0
#include "codecarta/bundle.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <json.hpp>
#include <algorithm>
#include <cctype>
#include <sstream>

#include "codecarta/error.hpp"

namespace codecarta {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kStylesheetLink = R"(<link rel="stylesheet" href="style.css">)";
constexpr std::string_view kScriptTag = R"(<script src="app.js"></script>)";
constexpr std::string_view kDataMarker = "<!-- codecarta:data -->";

nlohmann::ordered_json outline_json(const OutlineSpec& o) {
  return {{"style", to_string(o.style)}, {"width", o.width}, {"saturation", o.saturation}};
}

void replace_once(std::string& text, std::string_view marker, const std::string& with) {
  const auto at = text.find(marker);
  if (at == std::string::npos) {
    throw Error(ErrorCode::Build, "index.html lacks the injection point " + std::string(marker) +
                                      "; restore it from assets/webui in the source tree");
  }
  text.replace(at, marker.size(), with);
}

std::string data_block(std::string_view id, std::string_view payload) {
  return "<script type=\"application/octet-stream\" id=\"" + std::string(id) +
         "\" data-encoding=\"base64\" data-length=\"" + std::to_string(payload.size()) + "\">" +
         base64_encode(payload) + "</script>\n";
}

}  // namespace

std::string style_document(const EntityGraph& graph, const RenderConfig& config) {
  config.glyphs.check();
  nlohmann::ordered_json doc;
  doc["schemaVersion"] = kStyleVersion;
  doc["scalingMode"] = to_string(config.glyphs.scaling);
  nlohmann::ordered_json relations = nlohmann::ordered_json::object();
  for (RelationId r : kAllRelations) {
    const EdgeStyle s = edge_style(r, config.relations);
    relations[std::string(to_string(r))] = {{"color", s.color}, {"lineWeight", s.line_weight}, {"enabled", s.enabled}};
  }
  doc["relations"] = std::move(relations);
  nlohmann::ordered_json glyphs = nlohmann::ordered_json::object();
  for (const auto& [token, e] : graph.entities()) {
    const GlyphSpec g = glyph_for(e, config.glyphs);
    nlohmann::ordered_json j;
    j["icon"] = g.icon_id;
    j["tint"] = g.tint;
    if (g.corner_icon_id) j["corner"] = *g.corner_icon_id;
    j["inner"] = outline_json(g.inner);
    j["middle"] = outline_json(g.middle);
    j["outer"] = outline_json(g.outer);
    j["radius"] = g.radius;
    j["effect"] = to_string(g.effect);
    glyphs[render_token(token)] = std::move(j);
  }
  doc["glyphs"] = std::move(glyphs);
  return doc.dump(1) + "\n";
}

WebAssets load_assets(const fs::path& dir) {
  WebAssets a;
  const std::pair<const char*, std::string*> files[] = {
      {"index.html", &a.index_html}, {"app.js", &a.app_js}, {"style.css", &a.style_css}};
  for (const auto& [name, target] : files) {
    std::ifstream in(dir / name, std::ios::binary);
    if (!in) {
      throw Error(ErrorCode::Build, "web assets incomplete: " + (dir / name).string() +
                                        " is missing; point \"assets\" at a copy of assets/webui from the "
                                        "source tree or drop the key to use the built-in copy");
    }
    std::ostringstream text;
    text << in.rdbuf();
    *target = text.str();
  }
  return a;
}

std::vector<BundleFile> bundle(const BundleInput& input, const WebAssets& assets, bool single_file,
                               std::size_t size_budget) {
  if (!single_file) {
    if (assets.index_html.find(kScriptTag) == std::string::npos) {
      throw Error(ErrorCode::Build, "index.html does not load app.js; restore it from assets/webui");
    }
    return {{"app.js", assets.app_js},
            {"graph.json", input.graph_document},
            {"index.html", assets.index_html},
            {"layout.json", input.layout_document},
            {"style.css", assets.style_css},
            {"style.json", input.style_document}};
  }
  if (assets.app_js.find("</script") != std::string::npos || assets.style_css.find("</style") != std::string::npos) {
    throw Error(ErrorCode::Build, "web assets contain a closing tag that would end their inline element");
  }
  std::string html = assets.index_html;
  replace_once(html, kStylesheetLink, "<style>\n" + assets.style_css + "</style>");
  replace_once(html, kDataMarker,
               data_block("codecarta-graph", input.graph_document) +
                   data_block("codecarta-layout", input.layout_document) +
                   data_block("codecarta-style", input.style_document));
  replace_once(html, kScriptTag, "<script>\n" + assets.app_js + "</script>");
  if (html.size() > size_budget) {
    throw Error(ErrorCode::Build, "single-file bundle is " + std::to_string(html.size()) + " bytes, over the budget of " +
                                      std::to_string(size_budget));
  }
  return {{"index.html", std::move(html)}};
}

void write_bundle(const std::vector<BundleFile>& files, const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out.string() + ": " + ec.message());
  for (const BundleFile& f : files) {
    const fs::path path = out / f.path;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
    if (!file) throw Error(ErrorCode::Io, "cannot write " + path.string());
  }
}

std::optional<std::string> extract_data_block(std::string_view html, std::string_view id) {
  const std::string open = "id=\"" + std::string(id) + "\"";
  const auto at = html.find(open);
  if (at == std::string_view::npos) return std::nullopt;
  const auto tag_end = html.find('>', at);
  if (tag_end == std::string_view::npos) return std::nullopt;
  const std::string_view tag = html.substr(at, tag_end - at);
  const auto len_at = tag.find("data-length=\"");
  if (len_at == std::string_view::npos) return std::nullopt;
  std::size_t length = 0;
  try {
    length = std::stoull(std::string(tag.substr(len_at + 13)));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const auto close = html.find("</script>", tag_end);
  if (close == std::string_view::npos) return std::nullopt;
  auto decoded = base64_decode(html.substr(tag_end + 1, close - tag_end - 1));
  if (!decoded || decoded->size() != length) return std::nullopt;
  return decoded;
}

std::vector<std::string> find_external_references(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto is_scheme_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '.' || c == '-'; };
  auto is_stop = [](char c) { return std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '\'' || c == '<' || c == '>' || c == ')'; };
  auto until_stop = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && !is_stop(text[end])) ++end;
    return end;
  };
  std::vector<std::pair<std::size_t, std::string>> found;

  // scheme://...
  for (std::size_t at = lower.find("://"); at != std::string::npos; at = lower.find("://", at + 3)) {
    std::size_t begin = at;
    while (begin > 0 && is_scheme_char(lower[begin - 1])) --begin;
    while (begin < at && !std::isalpha(static_cast<unsigned char>(lower[begin]))) ++begin;
    if (begin == at) continue;
    found.emplace_back(begin, std::string(text.substr(begin, until_stop(at + 3) - begin)));
  }
  // attribute or url() values starting with "//", and @import.
  for (const std::string_view lead : {"src", "href", "action", "poster", "srcset", "data", "url("}) {
    for (std::size_t at = lower.find(lead); at != std::string::npos; at = lower.find(lead, at + 1)) {
      if (lead != "url(" && at > 0 && (std::isalnum(static_cast<unsigned char>(lower[at - 1])) || lower[at - 1] == '-')) continue;
      std::size_t k = at + lead.size();
      while (k < lower.size() && std::isspace(static_cast<unsigned char>(lower[k]))) ++k;
      if (lead != "url(") {
        if (k >= lower.size() || lower[k] != '=') continue;
        ++k;
        while (k < lower.size() && std::isspace(static_cast<unsigned char>(lower[k]))) ++k;
      }
      if (k < lower.size() && (lower[k] == '"' || lower[k] == '\'')) ++k;
      while (k < lower.size() && std::isspace(static_cast<unsigned char>(lower[k]))) ++k;
      if (lower.compare(k, 2, "//") != 0) continue;
      found.emplace_back(at, std::string(text.substr(at, until_stop(k + 2) - at)));
    }
  }
  for (std::size_t at = lower.find("@import"); at != std::string::npos; at = lower.find("@import", at + 1)) {
    found.emplace_back(at, std::string(text.substr(at, until_stop(at + 8) - at)));
  }
  std::sort(found.begin(), found.end());
  std::vector<std::string> out;
  for (auto& [at, s] : found) out.push_back(std::move(s));
  return out;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(bytes.data()), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::optional<std::string> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) return std::nullopt;
  if (text.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/=") !=
      std::string_view::npos) {
    return std::nullopt;
  }
  std::string out(3 * (text.size() / 4), '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) return std::nullopt;
  std::size_t padding = 0;
  if (!text.empty() && text.back() == '=') ++padding;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
  out.resize(static_cast<std::size_t>(n) - padding);
  return out;
}

}  // namespace codecarta
