#include "taxalign/mapping_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "taxalign/text.hpp"

namespace taxalign {

std::string format_mapping(const Mapping& mapping) {
  std::string out;
  char buf[64];
  for (const auto& e : mapping.entries) {
    out += e.source;
    out += '\t';
    for (std::size_t i = 0; i < e.targets.size(); ++i) {
      if (i) out += ',';
      std::snprintf(buf, sizeof buf, "%.6f", e.targets[i].second);
      out += e.targets[i].first;
      out += ':';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Mapping parse_mapping(std::string_view text, PartOfSpeech pos, std::string_view name) {
  Mapping m;
  m.pos = pos;
  auto lines = split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = lines[ln];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    const auto where = std::string(name) + ":" + std::to_string(ln + 1) + ": ";
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw GraphError(where + "expected 2 tab-separated fields");
    MappingEntry e;
    e.source = std::string(trim(fields[0]));
    if (!trim(fields[1]).empty()) {
      for (auto item : split(fields[1], ',')) {
        const auto colon = item.rfind(':');
        if (colon == std::string_view::npos) throw GraphError(where + "expected target:weight");
        auto wtext = trim(item.substr(colon + 1));
        double w = 0.0;
        auto [p, ec] = std::from_chars(wtext.data(), wtext.data() + wtext.size(), w);
        if (ec != std::errc() || p != wtext.data() + wtext.size())
          throw GraphError(where + "bad weight '" + std::string(wtext) + "'");
        e.targets.emplace_back(std::string(trim(item.substr(0, colon))), w);
      }
    }
    m.entries.push_back(std::move(e));
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const MappingEntry& a, const MappingEntry& b) { return a.source < b.source; });
  for (std::size_t i = 1; i < m.entries.size(); ++i)
    if (m.entries[i].source == m.entries[i - 1].source)
      throw GraphError(std::string(name) + ": duplicate entry for '" + m.entries[i].source + "'");
  return m;
}

std::string format_gold(const GoldSample& gold) {
  std::string out;
  for (const auto& [id, item] : gold.items) {
    out += id;
    out += '\t';
    if (item.no_correspondence) {
      out += '-';
    } else {
      for (std::size_t i = 0; i < item.targets.size(); ++i) {
        if (i) out += ',';
        out += item.targets[i];
      }
    }
    out += '\n';
  }
  return out;
}

GoldSample parse_gold(std::string_view text, std::string_view name) {
  GoldSample gold;
  auto lines = split(text, '\n');
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto line = lines[ln];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto where = std::string(name) + ":" + std::to_string(ln + 1) + ": ";
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw GraphError(where + "expected 2 tab-separated fields");
    const std::string id(trim(fields[0]));
    const auto rhs = trim(fields[1]);
    GoldItem item;
    if (rhs == "-") {
      item = GoldItem::none();
    } else {
      for (auto t : split(rhs, ',')) {
        t = trim(t);
        if (t.empty()) throw GraphError(where + "empty target id");
        item.targets.emplace_back(t);
      }
      std::sort(item.targets.begin(), item.targets.end());
      item.targets.erase(std::unique(item.targets.begin(), item.targets.end()), item.targets.end());
    }
    if (!gold.items.emplace(id, std::move(item)).second) throw GraphError(where + "duplicate gold id '" + id + "'");
  }
  return gold;
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace taxalign
