#include "ckpf/system_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ckpf {

namespace {

using json = nlohmann::ordered_json;

json rational_to_json(const Rational& r) {
  return json::array({r.num_i64(), r.den_i64()});
}

Rational rational_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("system json: rational must be a [num, den] pair");
  return Rational(j[0].get<long>(), j[1].get<long>());
}

json union_to_json(const IntervalUnion& u) {
  json arr = json::array();
  for (const auto& p : u.pieces())
    arr.push_back(json::array({p.lo.num_i64(), p.lo.den_i64(), p.hi.num_i64(), p.hi.den_i64()}));
  return arr;
}

IntervalUnion union_from_json(const json& arr, const Rational& ambient) {
  if (!arr.is_array()) throw std::invalid_argument("system json: interval union must be an array");
  std::vector<std::pair<Rational, Rational>> pieces;
  for (const auto& q : arr) {
    if (!q.is_array() || q.size() != 4)
      throw std::invalid_argument("system json: interval must be a [n_lo,d_lo,n_hi,d_hi] quadruple");
    pieces.emplace_back(Rational(q[0].get<long>(), q[1].get<long>()),
                        Rational(q[2].get<long>(), q[3].get<long>()));
  }
  return IntervalUnion(ambient, std::move(pieces));
}

json matrix_to_json(const ZeroOneMatrix& m) {
  json j;
  j["n_max"] = m.ambient_row_count();
  switch (m.kind()) {
    case ZeroOneMatrix::Kind::FullOnes:
      j["kind"] = "full-ones";
      break;
    case ZeroOneMatrix::Kind::Staircase:
      j["kind"] = "staircase";
      break;
    case ZeroOneMatrix::Kind::ExplicitBlock: {
      j["kind"] = "explicit";
      json rows = json::array();
      for (std::size_t i = 1; i <= m.ambient_row_count(); ++i) {
        json row = json::array();
        std::size_t width = m.ambient_row_count();
        auto s = m.row_support(i);
        if (s && !s->empty()) width = std::max(width, s->back());
        for (std::size_t jj = 1; jj <= width; ++jj) row.push_back(m.entry(i, jj));
        rows.push_back(std::move(row));
      }
      j["rows"] = std::move(rows);
      break;
    }
    case ZeroOneMatrix::Kind::RowSupports: {
      j["kind"] = "row-supports";
      json sup = json::array();
      for (std::size_t i = 1; i <= m.ambient_row_count(); ++i) {
        json row = json::array();
        auto s = m.row_support(i);
        if (s)
          for (std::size_t col : *s) row.push_back(col);
        sup.push_back(std::move(row));
      }
      j["supports"] = std::move(sup);
      break;
    }
  }
  return j;
}

ZeroOneMatrix matrix_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  std::size_t n_max = j.at("n_max").get<std::size_t>();
  if (kind == "full-ones") return ZeroOneMatrix::full_ones(n_max);
  if (kind == "staircase") return ZeroOneMatrix::staircase(n_max);
  if (kind == "explicit") {
    std::vector<std::vector<int>> rows;
    for (const auto& row : j.at("rows")) rows.push_back(row.get<std::vector<int>>());
    return ZeroOneMatrix::explicit_block(std::move(rows), n_max);
  }
  if (kind == "row-supports") {
    std::map<std::size_t, std::vector<std::size_t>> sup;
    std::size_t i = 1;
    for (const auto& row : j.at("supports")) sup[i++] = row.get<std::vector<std::size_t>>();
    return ZeroOneMatrix::row_supports(std::move(sup), n_max);
  }
  throw std::invalid_argument("system json: unknown matrix kind '" + kind + "'");
}

json piece_to_json(const BranchPiece& p) {
  json j;
  j["source"] = json::array({p.source_lo().num_i64(), p.source_lo().den_i64(),
                             p.source_hi().num_i64(), p.source_hi().den_i64()});
  j["target"] = json::array({p.target_lo().num_i64(), p.target_lo().den_i64(),
                             p.target_hi().num_i64(), p.target_hi().den_i64()});
  if (const auto* a = std::get_if<AffineMap>(&p.map())) {
    j["kind"] = "affine";
    j["slope"] = rational_to_json(a->slope);
    j["intercept"] = rational_to_json(a->intercept);
  } else {
    const auto& q = std::get<QuadraticSideMap>(p.map());
    j["kind"] = "quadratic";
    j["coeff"] = rational_to_json(q.coeff);
    j["vertex"] = rational_to_json(q.vertex);
    j["orientation"] = q.orientation;
  }
  return j;
}

BranchPiece piece_from_json(const json& j) {
  auto quad = [&](const char* key) {
    const auto& q = j.at(key);
    if (!q.is_array() || q.size() != 4)
      throw std::invalid_argument("system json: piece interval must be a quadruple");
    return std::pair<Rational, Rational>(Rational(q[0].get<long>(), q[1].get<long>()),
                                         Rational(q[2].get<long>(), q[3].get<long>()));
  };
  auto [src_lo, src_hi] = quad("source");
  auto [tgt_lo, tgt_hi] = quad("target");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "affine")
    return BranchPiece(src_lo, src_hi, tgt_lo, tgt_hi,
                       AffineMap{rational_from_json(j.at("slope")),
                                 rational_from_json(j.at("intercept"))});
  if (kind == "quadratic")
    return BranchPiece(src_lo, src_hi, tgt_lo, tgt_hi,
                       QuadraticSideMap{rational_from_json(j.at("coeff")),
                                        rational_from_json(j.at("vertex")),
                                        j.at("orientation").get<int>()});
  throw std::invalid_argument("system json: unknown piece kind '" + kind + "'");
}

}  // namespace

std::string system_to_json(const BranchingSystem& sys) {
  json j;
  j["name"] = sys.name();
  j["ambient"] = rational_to_json(sys.ambient());
  j["matrix"] = matrix_to_json(sys.matrix());
  j["range_support"] = union_to_json(sys.declared_range_support());
  json branches = json::array();
  for (const auto& b : sys.branches()) {
    json bj;
    bj["index"] = b.index();
    bj["domain"] = union_to_json(b.domain());
    bj["range"] = union_to_json(b.range());
    json pieces = json::array();
    for (const auto& p : b.pieces()) pieces.push_back(piece_to_json(p));
    bj["pieces"] = std::move(pieces);
    branches.push_back(std::move(bj));
  }
  j["branches"] = std::move(branches);
  return j.dump(2) + "\n";
}

BranchingSystem system_from_json(const std::string& text) {
  json j = json::parse(text);
  Rational ambient = rational_from_json(j.at("ambient"));
  ZeroOneMatrix matrix = matrix_from_json(j.at("matrix"));
  std::vector<BranchMap> branches;
  for (const auto& bj : j.at("branches")) {
    std::size_t index = bj.at("index").get<std::size_t>();
    IntervalUnion domain = union_from_json(bj.at("domain"), ambient);
    IntervalUnion range = union_from_json(bj.at("range"), ambient);
    std::vector<BranchPiece> pieces;
    for (const auto& pj : bj.at("pieces")) pieces.push_back(piece_from_json(pj));
    branches.emplace_back(index, std::move(domain), std::move(range), std::move(pieces));
  }
  std::string name = j.contains("name") ? j.at("name").get<std::string>() : "custom";
  BranchingSystem sys(ambient, std::move(branches), std::move(matrix), name);
  if (j.contains("range_support"))
    sys.declare_range_support(union_from_json(j.at("range_support"), ambient));
  return sys;
}

BranchingSystem load_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return system_from_json(ss.str());
}

ZeroOneMatrix build_matrix(const RunConfig& cfg) {
  if (cfg.matrix_kind == "full-ones") return ZeroOneMatrix::full_ones(cfg.n_max);
  if (cfg.matrix_kind == "staircase") return ZeroOneMatrix::staircase(cfg.n_max);
  if (cfg.matrix_kind == "explicit") return ZeroOneMatrix::explicit_block(cfg.matrix_rows, cfg.n_max);
  if (cfg.matrix_kind == "row-supports") {
    std::map<std::size_t, std::vector<std::size_t>> sup;
    for (std::size_t i = 0; i < cfg.matrix_supports.size(); ++i) sup[i + 1] = cfg.matrix_supports[i];
    return ZeroOneMatrix::row_supports(std::move(sup), cfg.n_max);
  }
  throw std::runtime_error("config: [matrix] kind is required for the standard builtin");
}

BranchingSystem build_system(const RunConfig& cfg) {
  if (!cfg.system_file.empty()) return load_system_file(cfg.system_file);
  if (cfg.builtin == "doubling") return doubling_system();
  if (cfg.builtin == "o-infinity") return o_infinity_system(cfg.n_max);
  if (cfg.builtin == "quadratic") {
    Rational l = cfg.ambient_l.value_or(Rational(static_cast<long>((cfg.n_max + 1) / 2)));
    return quadratic_system(cfg.n_max, l);
  }
  if (cfg.builtin == "standard") return standard_system(build_matrix(cfg), cfg.n_max);
  throw std::runtime_error("config: unknown builtin '" + cfg.builtin + "'");
}

}  // namespace ckpf
