#include "coarse/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coarse::io {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("schema violation: " + what);
}

const json& expect(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) fail(std::string("missing key ") + key);
  return doc.at(key);
}

std::int64_t expect_int(const json& v, const char* what) {
  if (!v.is_number_integer()) fail(std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

double expect_num(const json& v, const char* what) {
  if (!v.is_number()) fail(std::string(what) + " must be a number");
  return v.get<double>();
}

std::complex<double> parse_complex(const json& v, const char* what) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(std::string(what) + " must be a number or an [re,im] pair");
}

json complex_json(const std::complex<double>& z, bool force_pair) {
  if (!force_pair && z.imag() == 0.0) return json(z.real());
  return json::array({z.real(), z.imag()});
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("schema violation: " + path + " is not valid JSON: " +
                                e.what());
  }
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

FiniteMetricSpace load_space(const json& doc) {
  const json& pts = expect(doc, "points");
  const json& dist = expect(doc, "dist");
  const json& scale = expect(doc, "scale");
  if (!pts.is_array() || pts.empty()) fail("points must be a nonempty list");
  std::vector<std::string> points;
  for (const auto& p : pts) {
    if (!p.is_string()) fail("point ids must be strings");
    points.push_back(p.get<std::string>());
  }
  const int n = static_cast<int>(points.size());
  if (!dist.is_array() || static_cast<int>(dist.size()) != n)
    fail("dist must be an n x n matrix");
  DistMatrix d(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = dist[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail("dist must be an n x n matrix");
    for (int j = 0; j < n; ++j)
      d(i, j) = expect_int(row[static_cast<std::size_t>(j)], "distance");
  }
  return FiniteMetricSpace(std::move(points), std::move(d),
                           expect_int(scale, "scale"));
}

json save_space(const FiniteMetricSpace& X) {
  json doc;
  doc["points"] = X.points();
  json rows = json::array();
  for (int i = 0; i < X.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < X.size(); ++j) row.push_back(X.distance(i, j));
    rows.push_back(std::move(row));
  }
  doc["dist"] = std::move(rows);
  doc["scale"] = X.scale();
  return doc;
}

FiniteGroup load_group(const json& doc) {
  const json& elems = expect(doc, "elements");
  const json& table = expect(doc, "table");
  const json& gens = expect(doc, "generators");
  if (!elems.is_array() || elems.empty()) fail("elements must be a nonempty list");
  std::vector<std::string> elements;
  for (const auto& e : elems) {
    if (!e.is_string()) fail("element ids must be strings");
    elements.push_back(e.get<std::string>());
  }
  const int n = static_cast<int>(elements.size());
  if (!table.is_array() || static_cast<int>(table.size()) != n)
    fail("table must be an n x n matrix");
  Eigen::MatrixXi t(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = table[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail("table must be an n x n matrix");
    for (int j = 0; j < n; ++j)
      t(i, j) = static_cast<int>(expect_int(row[static_cast<std::size_t>(j)], "table entry"));
  }
  if (!gens.is_array()) fail("generators must be a list of indices");
  std::vector<int> generators;
  for (const auto& g : gens)
    generators.push_back(static_cast<int>(expect_int(g, "generator")));
  return FiniteGroup(std::move(elements), std::move(t), std::move(generators));
}

json save_group(const FiniteGroup& G) {
  json doc;
  doc["elements"] = G.elements();
  json rows = json::array();
  for (int i = 0; i < G.order(); ++i) {
    json row = json::array();
    for (int j = 0; j < G.order(); ++j) row.push_back(G.multiply(i, j));
    rows.push_back(std::move(row));
  }
  doc["table"] = std::move(rows);
  doc["generators"] = G.generators();
  return doc;
}

namespace {

PartialBijection load_pb(const json& v, int n_points, const char* what) {
  if (!v.is_array()) fail(std::string(what) + " must be a list of [x,y] pairs");
  std::vector<std::pair<int, int>> pairs;
  for (const auto& p : v) {
    if (!p.is_array() || p.size() != 2) fail(std::string(what) + " entries must be pairs");
    const int x = static_cast<int>(expect_int(p[0], "pair index"));
    const int y = static_cast<int>(expect_int(p[1], "pair index"));
    if (x < 0 || x >= n_points || y < 0 || y >= n_points)
      fail("pair index out of range");
    pairs.emplace_back(x, y);
  }
  return PartialBijection(std::move(pairs));
}

json save_pb(const PartialBijection& t) {
  json out = json::array();
  for (const auto& [x, y] : t.pairs()) out.push_back(json::array({x, y}));
  return out;
}

AtlasChart load_chart(const json& doc, int n_points) {
  AtlasChart chart;
  chart.radius = expect_int(expect(doc, "R"), "R");
  for (const auto& t : expect(doc, "translations"))
    chart.translations.push_back(load_pb(t, n_points, "translation"));
  for (const auto& s : expect(doc, "cotranslations"))
    chart.cotranslations.push_back(load_pb(s, n_points, "cotranslation"));
  return chart;
}

}  // namespace

Atlas load_atlas(const json& doc, int n_points) {
  Atlas atlas;
  if (doc.is_object()) {
    atlas.charts.push_back(load_chart(doc, n_points));
    return atlas;
  }
  if (!doc.is_array()) fail("atlas must be a chart object or a list of charts");
  for (const auto& chart : doc) atlas.charts.push_back(load_chart(chart, n_points));
  return atlas;
}

json save_atlas(const Atlas& A) {
  json out = json::array();
  for (const auto& chart : A.charts) {
    json c;
    c["R"] = chart.radius;
    json ts = json::array();
    for (const auto& t : chart.translations) ts.push_back(save_pb(t));
    c["translations"] = std::move(ts);
    json ss = json::array();
    for (const auto& s : chart.cotranslations) ss.push_back(save_pb(s));
    c["cotranslations"] = std::move(ss);
    out.push_back(std::move(c));
  }
  return out;
}

Kernel load_kernel(const json& doc) {
  const json& entries = expect(doc, "entries");
  if (!entries.is_array() || entries.empty()) fail("entries must be a nonempty matrix");
  const int n = static_cast<int>(entries.size());
  Kernel K(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = entries[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail("entries must be a square matrix");
    for (int j = 0; j < n; ++j)
      K(i, j) = parse_complex(row[static_cast<std::size_t>(j)], "kernel entry");
  }
  return K;
}

json save_kernel(const Kernel& K, const std::string& space_ref) {
  json doc;
  doc["space"] = space_ref;
  const bool any_imag = K.imag().cwiseAbs().maxCoeff() != 0.0;
  json rows = json::array();
  for (int i = 0; i < K.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < K.cols(); ++j) row.push_back(complex_json(K(i, j), any_imag));
    rows.push_back(std::move(row));
  }
  doc["entries"] = std::move(rows);
  return doc;
}

PropACertificate load_certificate(const json& doc, const FiniteMetricSpace& X) {
  PropACertificate cert;
  const json& variant = expect(doc, "variant");
  if (!variant.is_string()) fail("variant must be a string");
  cert.variant = cert_variant_from_string(variant.get<std::string>());
  const json& params = expect(doc, "params");
  if (params.contains("R")) cert.params.R = expect_int(params.at("R"), "R");
  if (params.contains("eps")) cert.params.eps = expect_num(params.at("eps"), "eps");
  if (params.contains("S")) cert.params.S = expect_int(params.at("S"), "S");
  if (params.contains("delta"))
    cert.params.delta = expect_num(params.at("delta"), "delta");
  const json& payload = expect(doc, "payload");

  const int n = X.size();
  if (cert.variant == CertVariant::yu_sets) {
    const json& sets = expect(payload, "sets");
    cert.sets.assign(static_cast<std::size_t>(n), {});
    if (!sets.is_object()) fail("sets payload must map points to element lists");
    for (const auto& [id, list] : sets.items()) {
      const int x = X.index_of(id);
      if (!list.is_array()) fail("set must be a list");
      for (const auto& e : list) {
        if (!e.is_array() || e.size() != 2) fail("set elements are [point, level] pairs");
        cert.sets[static_cast<std::size_t>(x)].emplace_back(
            X.index_of(e[0].get<std::string>()),
            static_cast<int>(expect_int(e[1], "level")));
      }
    }
  } else if (cert.variant == CertVariant::kernel_real ||
             cert.variant == CertVariant::kernel_roe) {
    cert.kernel = load_kernel(expect(payload, "kernel"));
  } else {
    const json& vectors = expect(payload, "vectors");
    if (!vectors.is_object()) fail("vectors payload must map points to sparse maps");
    if (cert.variant == CertVariant::hilbert) {
      // Abstract coordinates: collect the index set first.
      std::vector<std::string> coords;
      for (const auto& [id, vec] : vectors.items()) {
        (void)X.index_of(id);
        if (!vec.is_object()) fail("vector must be a sparse map");
        for (const auto& [coord, val] : vec.items())
          if (std::find(coords.begin(), coords.end(), coord) == coords.end())
            coords.push_back(coord);
      }
      std::sort(coords.begin(), coords.end());
      cert.vectors = Eigen::MatrixXcd::Zero(
          std::max<std::int64_t>(static_cast<std::int64_t>(coords.size()), 1), n);
      for (const auto& [id, vec] : vectors.items()) {
        const int x = X.index_of(id);
        for (const auto& [coord, val] : vec.items()) {
          const auto it = std::lower_bound(coords.begin(), coords.end(), coord);
          cert.vectors(it - coords.begin(), x) = parse_complex(val, "vector entry");
        }
      }
    } else {
      cert.vectors = Eigen::MatrixXcd::Zero(n, n);
      for (const auto& [id, vec] : vectors.items()) {
        const int x = X.index_of(id);
        if (!vec.is_object()) fail("vector must be a sparse map");
        for (const auto& [coord, val] : vec.items())
          cert.vectors(X.index_of(coord), x) = parse_complex(val, "vector entry");
      }
    }
  }
  return cert;
}

json save_certificate(const PropACertificate& cert, const FiniteMetricSpace& X) {
  json doc;
  doc["variant"] = to_string(cert.variant);
  json params;
  params["R"] = cert.params.R;
  params["eps"] = cert.params.eps;
  params["S"] = cert.params.S;
  params["delta"] = cert.params.delta;
  doc["params"] = std::move(params);

  json payload;
  if (cert.variant == CertVariant::yu_sets) {
    json sets = json::object();
    for (int x = 0; x < X.size(); ++x) {
      json list = json::array();
      for (const auto& [y, lvl] : cert.sets[static_cast<std::size_t>(x)])
        list.push_back(json::array({X.point(y), lvl}));
      sets[X.point(x)] = std::move(list);
    }
    payload["sets"] = std::move(sets);
  } else if (cert.variant == CertVariant::kernel_real ||
             cert.variant == CertVariant::kernel_roe) {
    payload["kernel"] = save_kernel(cert.kernel, "");
  } else {
    const bool any_imag = cert.vectors.imag().cwiseAbs().maxCoeff() != 0.0;
    json vectors = json::object();
    for (int x = 0; x < X.size(); ++x) {
      json vec = json::object();
      for (int z = 0; z < cert.vectors.rows(); ++z) {
        if (cert.vectors(z, x) == 0.0) continue;
        const std::string key = cert.variant == CertVariant::hilbert
                                    ? "e" + std::to_string(z)
                                    : X.point(z);
        vec[key] = complex_json(cert.vectors(z, x), any_imag);
      }
      vectors[X.point(x)] = std::move(vec);
    }
    payload["vectors"] = std::move(vectors);
  }
  doc["payload"] = std::move(payload);
  return doc;
}

TelescopeGraph load_graph(const json& doc, const FiniteMetricSpace& X) {
  TelescopeGraph G;
  const json& verts = expect(doc, "vertices");
  if (!verts.is_array() || verts.empty()) fail("vertices must be a nonempty list");
  for (const auto& v : verts) {
    if (!v.is_array() || v.size() != 3) fail("vertices are [level,x,y] triples");
    TelescopeGraph::Vertex vx;
    vx.level = expect_int(v[0], "level");
    vx.x = static_cast<int>(expect_int(v[1], "vertex point"));
    vx.y = static_cast<int>(expect_int(v[2], "vertex point"));
    if (vx.x < 0 || vx.x >= X.size() || vx.y < 0 || vx.y >= X.size())
      fail("vertex point out of range");
    G.i_max = std::max(G.i_max, vx.level);
    G.vertices.push_back(vx);
  }
  G.adj.assign(G.vertices.size(), {});
  for (const auto& e : expect(doc, "edges")) {
    if (!e.is_array() || e.size() != 2) fail("edges are [v,w] pairs");
    const int a = static_cast<int>(expect_int(e[0], "edge end"));
    const int b = static_cast<int>(expect_int(e[1], "edge end"));
    if (a < 0 || b < 0 || a >= static_cast<int>(G.vertices.size()) ||
        b >= static_cast<int>(G.vertices.size()))
      fail("edge end out of range");
    G.adj[static_cast<std::size_t>(a)].push_back(b);
    G.adj[static_cast<std::size_t>(b)].push_back(a);
  }
  G.embedding.assign(static_cast<std::size_t>(X.size()), -1);
  for (std::size_t i = 0; i < G.vertices.size(); ++i) {
    const auto& v = G.vertices[i];
    if (v.level == 0 && v.x == v.y)
      G.embedding[static_cast<std::size_t>(v.x)] = static_cast<int>(i);
  }
  for (int x = 0; x < X.size(); ++x)
    if (G.embedding[static_cast<std::size_t>(x)] < 0)
      fail("graph is missing the base vertex of " + X.point(x));
  return G;
}

json save_graph(const TelescopeGraph& G, const FiniteMetricSpace&) {
  json doc;
  json verts = json::array();
  for (const auto& v : G.vertices)
    verts.push_back(json::array({v.level, v.x, v.y}));
  doc["vertices"] = std::move(verts);
  json edges = json::array();
  for (std::size_t a = 0; a < G.adj.size(); ++a)
    for (int b : G.adj[a])
      if (static_cast<int>(a) < b)
        edges.push_back(json::array({static_cast<int>(a), b}));
  doc["edges"] = std::move(edges);
  return doc;
}

std::vector<NamedMap> load_maps(const json& doc) {
  std::vector<NamedMap> maps;
  auto parse_one = [](const json& m) {
    NamedMap out;
    const json& dom = expect(m, "domain");
    const json& val = expect(m, "values");
    if (!dom.is_array() || !val.is_array() || dom.size() != val.size())
      fail("map domain and values must be aligned lists");
    for (const auto& d : dom) out.domain.push_back(d.get<std::string>());
    for (const auto& v : val) out.values.push_back(v.get<std::string>());
    return out;
  };
  if (doc.is_object() && doc.contains("maps")) {
    for (const auto& m : doc.at("maps")) maps.push_back(parse_one(m));
  } else {
    maps.push_back(parse_one(doc));
  }
  return maps;
}

json save_maps(const std::vector<NamedMap>& maps) {
  json doc;
  json list = json::array();
  for (const auto& m : maps) {
    json one;
    one["domain"] = m.domain;
    one["values"] = m.values;
    list.push_back(std::move(one));
  }
  doc["maps"] = std::move(list);
  return doc;
}

GlueDocument load_glue(const json& doc) {
  GlueDocument out;
  out.R = expect_int(expect(doc, "R"), "R");
  out.eps = expect_num(expect(doc, "eps"), "eps");
  for (const auto& b : expect(doc, "blocks")) {
    GlueBlock block{load_space(expect(b, "space")), load_kernel(expect(b, "kernel")),
                    expect_int(expect(b, "offset"), "offset")};
    if (block.kernel.rows() != block.space.size())
      fail("block kernel does not match its space");
    out.blocks.push_back(std::move(block));
  }
  return out;
}

}  // namespace coarse::io
