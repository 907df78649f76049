#pragma once

#include "coarse/constructions.hpp"
#include "coarse/group.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/partial_translation.hpp"
#include "coarse/property_a.hpp"
#include "coarse/roe.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace coarse::io {

using json = nlohmann::ordered_json;

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// Space document: {"points": [...], "dist": [[...]], "scale": int}.
// load then save reproduces the document up to whitespace.
FiniteMetricSpace load_space(const json& doc);
json save_space(const FiniteMetricSpace& X);

// Group document: {"elements": [...], "table": [[...]], "generators": [...]}.
FiniteGroup load_group(const json& doc);
json save_group(const FiniteGroup& G);

// Atlas document: list of charts
// {"R": int, "translations": [[[x,y],...],...], "cotranslations": [...]}
// with point indices into the space document.
Atlas load_atlas(const json& doc, int n_points);
json save_atlas(const Atlas& A);

// Kernel document: {"space": ref, "entries": [[[re,im],...],...]}.
Kernel load_kernel(const json& doc);
json save_kernel(const Kernel& K, const std::string& space_ref);

// Certificate document:
// {"variant": str, "params": {"R","eps","S","delta"}, "payload": ...}
// with vectors as sparse {point: value} maps.
PropACertificate load_certificate(const json& doc, const FiniteMetricSpace& X);
json save_certificate(const PropACertificate& cert, const FiniteMetricSpace& X);

// Graph document: {"vertices": [[i,x,y],...], "edges": [[v,w],...]}.
TelescopeGraph load_graph(const json& doc, const FiniteMetricSpace& X);
json save_graph(const TelescopeGraph& G, const FiniteMetricSpace& X);

// Map documents: {"domain": [ids], "values": [ids]} or {"maps": [...]}
// for families.
struct NamedMap {
  std::vector<std::string> domain;
  std::vector<std::string> values;
};
std::vector<NamedMap> load_maps(const json& doc);
json save_maps(const std::vector<NamedMap>& maps);

// Gluing document: {"R": int, "eps": num, "blocks":
//   [{"offset": int, "space": {...}, "kernel": {...}}, ...]}.
struct GlueDocument {
  Dist R = 0;
  double eps = 0;
  std::vector<GlueBlock> blocks;
};
GlueDocument load_glue(const json& doc);

}  // namespace coarse::io
