#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "specred/graphs.hpp"
#include "specred/qwalk.hpp"
#include "specred/unfolding.hpp"

// JSON document layer.  Exact scalars travel as rational strings "p/q", float
// scalars as [re, im] number pairs; everything else is shape-for-shape the
// in-memory value.  Emission uses nlohmann's map-backed json, so keys always
// come out alphabetically -- canonical bytes for fixed input.

namespace specred {

using Json = nlohmann::json;

inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline Json load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

inline std::string render_document(const Json& j) { return j.dump(2) + "\n"; }

// --- scalars ----------------------------------------------------------------

inline Rat rat_from_json(const Json& x) {
  try {
    if (x.is_string()) return Rat(x.get<std::string>());
    if (x.is_number_integer()) return Rat(x.get<long long>());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad rational: ") + e.what());
  }
  throw Error(ErrorCode::ParseError, "exact documents encode numbers as \"p/q\" strings");
}

inline double real_from_json(const Json& x) {
  if (x.is_number()) return x.get<double>();
  if (x.is_string()) return to_double(rat_from_json(x));
  throw Error(ErrorCode::ParseError, "expected a number");
}

template <class F>
Json scalar_json(const F& v) {
  if constexpr (FieldTraits<F>::exact)
    return Json::array({v.re.str(), v.im.str()});
  else
    return Json::array({v.real(), v.imag()});
}

template <class F>
F scalar_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::ParseError, "scalar must be a [re, im] pair");
  if constexpr (FieldTraits<F>::exact)
    return F(rat_from_json(j[0]), rat_from_json(j[1]));
  else
    return F(real_from_json(j[0]), real_from_json(j[1]));
}

// --- rational functions and matrices ----------------------------------------

template <class F>
Json rf_json(const RationalFunction<F>& r) {
  Json num = Json::array(), den = Json::array();
  for (const F& c : r.num.c) num.push_back(scalar_json<F>(c));
  for (const F& c : r.den.c) den.push_back(scalar_json<F>(c));
  return Json{{"num", num}, {"den", den}};
}

template <class F>
RationalFunction<F> rf_from_json(const Json& j, const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw Error(ErrorCode::ParseError, "rational function needs num/den arrays");
  std::vector<F> num, den;
  for (const Json& c : j.at("num")) num.push_back(scalar_from_json<F>(c));
  for (const Json& c : j.at("den")) den.push_back(scalar_from_json<F>(c));
  return rf_normalize(Polynomial<F>(std::move(num)), Polynomial<F>(std::move(den)), tol);
}

template <class F>
Json mat_json(const Mat<F>& m) {
  Json entries = Json::array();
  for (const F& v : m.a) entries.push_back(scalar_json<F>(v));
  return Json{{"rows", m.rows}, {"cols", m.cols}, {"entries", entries}};
}

template <class F>
Json rm_json(const RatMatrix<F>& m) {
  Json entries = Json::array();
  for (const auto& v : m.a) entries.push_back(rf_json(v));
  return Json{{"rows", m.rows}, {"cols", m.cols}, {"entries", entries}};
}

namespace detail {

inline std::pair<int, int> shape_from_json(const Json& j, size_t got) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    throw Error(ErrorCode::ParseError, "matrix needs rows/cols/entries");
  int r = j.at("rows").get<int>(), c = j.at("cols").get<int>();
  if (r < 0 || c < 0 || got != size_t(r) * size_t(c))
    throw Error(ErrorCode::ParseError, "entry count does not match rows*cols");
  return {r, c};
}

}  // namespace detail

template <class F>
Mat<F> mat_from_json(const Json& j) {
  const Json& e = j.is_object() && j.contains("entries") ? j.at("entries") : j;
  if (!e.is_array()) throw Error(ErrorCode::ParseError, "matrix entries must be an array");
  auto [r, c] = detail::shape_from_json(j, e.size());
  Mat<F> m(r, c);
  for (size_t k = 0; k < e.size(); ++k) m.a[k] = scalar_from_json<F>(e[k]);
  return m;
}

template <class F>
RatMatrix<F> rm_from_json(const Json& j, const Tolerances& tol = {}) {
  const Json& e = j.is_object() && j.contains("entries") ? j.at("entries") : j;
  if (!e.is_array()) throw Error(ErrorCode::ParseError, "matrix entries must be an array");
  auto [r, c] = detail::shape_from_json(j, e.size());
  RatMatrix<F> m(r, c);
  for (size_t k = 0; k < e.size(); ++k) m.a[k] = rf_from_json<F>(e[k], tol);
  return m;
}

// --- labeled matrices and selectors -----------------------------------------

template <class F>
Json labeled_json(const LabeledMatrix<F>& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.entries.rows; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.entries.cols; ++j) row.push_back(scalar_json<F>(m.entries(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"labels", m.labels}, {"matrix", rows}, {"hermitian", m.hermitian}};
}

template <class F>
LabeledMatrix<F> labeled_from_json(const Json& j, const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("matrix"))
    throw Error(ErrorCode::ParseError, "labeled matrix needs labels and matrix");
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  const Json& rows = j.at("matrix");
  const int n = int(labels.size());
  if (!rows.is_array() || int(rows.size()) != n)
    throw Error(ErrorCode::ParseError, "matrix must have one row per label");
  Mat<F> m(n, n);
  for (int i = 0; i < n; ++i) {
    if (!rows[size_t(i)].is_array() || int(rows[size_t(i)].size()) != n)
      throw Error(ErrorCode::ParseError, "matrix rows must all have length " + std::to_string(n));
    for (int k = 0; k < n; ++k) m(i, k) = scalar_from_json<F>(rows[size_t(i)][size_t(k)]);
  }
  // hermitian is recomputed, not trusted from the document.
  return make_labeled(std::move(labels), std::move(m), tol);
}

template <class F>
Selector<F> selector_from_json(const Json& j) {
  if (j.is_object() && j.contains("subset"))
    return Selector<F>::of_subset(j.at("subset").get<std::vector<std::string>>());
  if (j.is_object() && j.contains("frame")) {
    const Json& rows = j.at("frame");
    if (!rows.is_array() || rows.empty() || !rows[0].is_array())
      throw Error(ErrorCode::ParseError, "frame must be an array of rows");
    Mat<F> f(int(rows.size()), int(rows[0].size()));
    for (int i = 0; i < f.rows; ++i) {
      if (int(rows[size_t(i)].size()) != f.cols)
        throw Error(ErrorCode::ParseError, "ragged frame rows");
      for (int k = 0; k < f.cols; ++k)
        f(i, k) = scalar_from_json<F>(rows[size_t(i)][size_t(k)]);
    }
    return Selector<F>::of_frame(std::move(f));
  }
  throw Error(ErrorCode::ParseError, "selector needs subset or frame");
}

inline VertexPartition partition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("classes"))
    throw Error(ErrorCode::ParseError, "partition needs classes");
  return {j.at("classes").get<std::vector<std::vector<std::string>>>()};
}

// --- edge lists -------------------------------------------------------------

// Plain text interchange: one "u v weight" per line (weight optional, default
// 1); '#' starts a comment.  Vertices appear in first-mention order.
template <class F>
LabeledMatrix<F> edge_list_parse(const std::string& text, const Tolerances& tol = {}) {
  std::vector<std::string> labels;
  auto vertex = [&](const std::string& name) {
    for (size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == name) return int(i);
    labels.push_back(name);
    return int(labels.size()) - 1;
  };
  struct Edge {
    int u, v;
    F w;
  };
  std::vector<Edge> edges;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string bare = line.substr(0, line.find('#'));
    std::istringstream ls(bare);
    std::string u, v, w;
    if (!(ls >> u)) continue;
    if (!(ls >> v))
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(lineno) + ": expected 'u v [weight]'");
    F weight = FieldTraits<F>::one();
    if (ls >> w) {
      try {
        if constexpr (FieldTraits<F>::exact)
          weight = F(Rat(w));
        else
          weight = F(std::stod(w), 0.0);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(lineno) + ": bad weight '" + w + "'");
      }
    }
    edges.push_back({vertex(u), vertex(v), weight});
  }
  Mat<F> m(int(labels.size()), int(labels.size()), FieldTraits<F>::zero());
  for (const auto& e : edges) {
    m(e.u, e.v) = e.w;
    m(e.v, e.u) = FieldTraits<F>::conj(e.w);
  }
  return make_labeled(std::move(labels), std::move(m), tol);
}

// Loads a labeled matrix from JSON or, for non-JSON text, the edge list form.
template <class F>
LabeledMatrix<F> labeled_load(const std::string& path, const Tolerances& tol = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return labeled_from_json<F>(parse_document(text), tol);
  return edge_list_parse<F>(text, tol);
}

// --- compound documents -----------------------------------------------------

template <class F>
Json unfolding_json(const Unfolding<F>& u) {
  Json prov = Json::array();
  for (const auto& p : u.provenance) prov.push_back(Json{{"op", p.op}, {"params", p.params}});
  return Json{{"matrix", labeled_json(u.matrix)}, {"subset", u.subset}, {"provenance", prov}};
}

template <class F>
Unfolding<F> unfolding_from_json(const Json& j, const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("matrix") || !j.contains("subset"))
    throw Error(ErrorCode::ParseError, "unfolding needs matrix and subset");
  Unfolding<F> u;
  u.matrix = labeled_from_json<F>(j.at("matrix"), tol);
  u.subset = j.at("subset").get<std::vector<std::string>>();
  if (j.contains("provenance"))
    for (const Json& p : j.at("provenance"))
      u.provenance.push_back({p.value("op", ""), p.value("params", "")});
  if (u.subset.size() > size_t(u.matrix.entries.rows))
    throw Error(ErrorCode::ParseError, "subset larger than the matrix");
  for (size_t i = 0; i < u.subset.size(); ++i)
    if (u.subset[i] != u.matrix.labels[i])
      throw Error(ErrorCode::ParseError, "unfolding subset must be the leading labels");
  return u;
}

inline Json walksample_json(const WalkSample& w) {
  Json blocks = Json::array();
  for (const auto& b : w.blocks) {
    Json flat = Json::array();
    for (const Cx& v : b.a) flat.push_back(scalar_json<Cx>(v));
    blocks.push_back(std::move(flat));
  }
  return Json{{"subset", w.subset}, {"times", w.times}, {"blocks", blocks}};
}

inline WalkSample walksample_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("subset") || !j.contains("times") || !j.contains("blocks"))
    throw Error(ErrorCode::ParseError, "walk sample needs subset/times/blocks");
  WalkSample w;
  w.subset = j.at("subset").get<std::vector<std::string>>();
  w.times = j.at("times").get<std::vector<double>>();
  const int s = int(w.subset.size());
  for (const Json& flat : j.at("blocks")) {
    if (int(flat.size()) != s * s)
      throw Error(ErrorCode::ParseError, "walk block is not subset-sized");
    Mat<Cx> b(s, s);
    for (size_t k = 0; k < flat.size(); ++k) b.a[k] = scalar_from_json<Cx>(flat[k]);
    w.blocks.push_back(std::move(b));
  }
  if (w.blocks.size() != w.times.size())
    throw Error(ErrorCode::ParseError, "one walk block per time required");
  return w;
}

template <class F>
Json pfd_json(const PartialFractionForm<F>& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms) {
    Json res = Json::array();
    for (const auto& k : t.coeffs) res.push_back(mat_json(k));
    terms.push_back(Json{{"pole", scalar_json<F>(t.pole)}, {"order", t.order}, {"residues", res}});
  }
  return Json{{"constant", mat_json(p.constant)}, {"terms", terms}};
}

template <class F>
TrigWalkSpec<F> trig_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("entries"))
    throw Error(ErrorCode::ParseError, "trig walk spec needs size and entries");
  const int s = j.at("size").get<int>();
  const Json& entries = j.at("entries");
  if (s <= 0 || int(entries.size()) != s * s)
    throw Error(ErrorCode::ParseError, "trig walk needs size*size entry lists");
  TrigWalkSpec<F> spec;
  spec.entries = Mat<std::vector<TrigTerm<F>>>(s, s);
  for (size_t k = 0; k < entries.size(); ++k) {
    for (const Json& tj : entries[k]) {
      TrigTerm<F> t;
      t.amp = scalar_from_json<F>(tj.at("amp"));
      t.freq = tj.at("freq").get<int>();
      std::string kind = tj.at("kind").get<std::string>();
      if (kind != "cos" && kind != "sin")
        throw Error(ErrorCode::ParseError, "trig term kind must be cos or sin");
      t.is_sin = (kind == "sin");
      spec.entries.a[k].push_back(std::move(t));
    }
  }
  return spec;
}

inline Json pst_json(const PSTOutcome& o) {
  return Json{{"certified", o.certified},
              {"u", o.cert.u},
              {"v", o.cert.v},
              {"tau", o.cert.tau},
              {"gamma", scalar_json<Cx>(o.cert.gamma)},
              {"deviation", o.cert.deviation},
              {"mass", o.mass}};
}

}  // namespace specred
