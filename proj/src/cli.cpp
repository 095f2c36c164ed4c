#include "sutured/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "sutured/fox.hpp"
#include "sutured/heegaard.hpp"

namespace sutured::cli {

namespace {

std::string_view trim(std::string_view s, std::size_t* lead = nullptr) {
  std::size_t a = 0;
  while (a < s.size() && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  std::size_t b = s.size();
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  if (lead) *lead = a;
  return s.substr(a, b - a);
}

struct Field {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;  // of the value
};

std::vector<Field> read_fields(std::string_view text, std::initializer_list<std::string_view> allowed) {
  std::vector<Field> out;
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    ++line;
    pos = nl + 1;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::size_t lead = 0;
    std::string_view body = trim(raw, &lead);
    if (body.empty()) continue;
    std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", line, static_cast<int>(lead) + 1);
    std::string key(trim(body.substr(0, colon)));
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError("unknown key '" + key + "'", line, static_cast<int>(lead) + 1);
    std::size_t vlead = 0;
    std::string_view value = trim(body.substr(colon + 1), &vlead);
    out.push_back({key, std::string(value), line, static_cast<int>(lead + colon + 1 + vlead) + 1});
  }
  return out;
}

// Runs fn and relocates any error it raises to the field's position.
template <class Fn>
auto at(const Field& f, int offset, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(e.message(), f.line, f.column + offset + e.column() - 1);
  } catch (const Error& e) {
    throw ParseError(e.name() + ": " + e.what(), f.line, f.column + offset);
  }
}

Int parse_int(std::string_view s) {
  s = trim(s);
  Int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw ParseError("expected an integer", 1, 1);
  return v;
}

const Field* find(const std::vector<Field>& fs, std::string_view key) {
  const Field* found = nullptr;
  for (const auto& f : fs)
    if (f.key == key) {
      if (found) throw ParseError("duplicate key '" + f.key + "'", f.line, 1);
      found = &f;
    }
  return found;
}

const Field& require(const std::vector<Field>& fs, std::string_view key) {
  const Field* f = find(fs, key);
  if (!f) throw ParseError("missing key '" + std::string(key) + "'", 1, 1);
  return *f;
}

RingNames read_names(const std::vector<Field>& fs, const FinAbGroup& g) {
  const Field* f = find(fs, "names");
  if (!f) return RingNames::defaults(g);
  RingNames n;
  std::istringstream in(f->value);
  for (std::string w; in >> w;) n.names.push_back(w);
  if (n.names.size() != g.dim())
    throw ParseError("expected " + std::to_string(g.dim()) + " names", f->line, f->column);
  return n;
}

GroupElem parse_monomial(std::string_view s, const FinAbGroup& g, const RingNames& names) {
  auto x = GroupRingElem::parse(s, g, names);
  if (x.size() != 1 || x.twice_terms().begin()->second != 2) throw InvalidInput("expected a monomial");
  return x.twice_terms().begin()->first;
}

std::string mono(const FinAbGroup& g, const GroupElem& e, const RingNames& names) {
  return GroupRingElem::monomial(g, e).to_string(names);
}

RingNames slice(const RingNames& n, std::size_t from, std::size_t count) {
  RingNames out;
  for (std::size_t i = from; i < from + count && i < n.names.size(); ++i) out.names.push_back(n.names[i]);
  return out;
}

}  // namespace

GreFile parse_gre(std::string_view text) {
  auto fs = read_fields(text, {"group", "names", "element", "meridian", "dim"});
  const Field& gf = require(fs, "group");
  GreFile out;
  out.group = at(gf, 0, [&] { return FinAbGroup::parse(gf.value); });
  out.names = read_names(fs, out.group);
  const Field& ef = require(fs, "element");
  out.element = at(ef, 0, [&] { return GroupRingElem::parse(ef.value, out.group, out.names); });
  if (const Field* m = find(fs, "meridian"))
    out.meridian = at(*m, 0, [&] { return parse_monomial(m->value, out.group, out.names); });
  if (const Field* d = find(fs, "dim")) {
    out.dim = at(*d, 0, [&] { return parse_int(d->value); });
    if (*out.dim < 0) throw ParseError("dimension must be non-negative", d->line, d->column);
  }
  return out;
}

DetFile parse_det(std::string_view text) {
  auto fs = read_fields(text, {"group", "names", "meridian", "h1", "coset"});
  const Field& gf = require(fs, "group");
  DetFile out;
  out.input.group = at(gf, 0, [&] { return FinAbGroup::parse(gf.value); });
  out.names = read_names(fs, out.input.group);
  const Field& mf = require(fs, "meridian");
  out.input.meridian = at(mf, 0, [&] { return parse_monomial(mf.value, out.input.group, out.names); });
  const Field& hf = require(fs, "h1");
  out.input.h1_order = at(hf, 0, [&] { return parse_int(hf.value); });
  for (const auto& f : fs) {
    if (f.key != "coset") continue;
    std::size_t bar1 = f.value.find('|');
    std::size_t bar2 = bar1 == std::string::npos ? bar1 : f.value.find('|', bar1 + 1);
    if (bar2 == std::string::npos) throw ParseError("expected 's | dim | chi'", f.line, f.column);
    std::string_view v = f.value;
    CosetData c;
    c.s = at(f, 0, [&] { return parse_monomial(v.substr(0, bar1), out.input.group, out.names); });
    c.dim = at(f, static_cast<int>(bar1 + 1), [&] { return parse_int(v.substr(bar1 + 1, bar2 - bar1 - 1)); });
    std::size_t lead = 0;
    std::string_view chi = trim(v.substr(bar2 + 1), &lead);
    c.chi = at(f, static_cast<int>(bar2 + 1 + lead),
               [&] { return GroupRingElem::parse(chi, out.input.group, out.names); });
    out.input.cosets.push_back(std::move(c));
  }
  if (out.input.cosets.empty()) throw ParseError("no coset lines", 1, 1);
  return out;
}

std::string Report::render(Format f) const {
  std::size_t width = 0;
  for (const auto& [k, v] : rows_) width = std::max(width, k.size());
  std::string out;
  for (const auto& [k, v] : rows_) {
    if (f == Format::Kv) {
      out += k + "=" + v + "\n";
    } else {
      out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
    }
  }
  return out;
}

bool is_file_command(std::string_view command) {
  return std::find(std::begin(kFileCommands), std::end(kFileCommands), command) != std::end(kFileCommands);
}

std::string status_name(int exit_code) {
  switch (exit_code) {
    case Ok: return "ok";
    case Violation: return "violation";
    case Inconsistent: return "inconsistent";
    default: return "input-error";
  }
}

namespace {

const char* route_name(DivisionRoute r) {
  switch (r) {
    case DivisionRoute::Exact: return "exact";
    case DivisionRoute::Characters: return "characters";
    case DivisionRoute::None: break;
  }
  return "none";
}

int torsion_report(std::string_view text, Report& r) {
  auto p = GroupPresentation::parse(text);
  r.add("generators", static_cast<Int>(p.num_generators()));
  r.add("relators", static_cast<Int>(p.relators.size()));
  auto s = sutured_torsion(p);
  RingNames names = RingNames::defaults(s.group);
  r.add("group", s.group.to_string());
  r.add("meridian", mono(s.group, s.meridian, names));
  r.add("column", static_cast<Int>(s.column));
  r.add("route", route_name(s.route));
  r.add("torsion", s.value.to_string(names));
  r.add("normal_form", PmClass(s.value).normal_form().to_string(names));
  r.add("norm", s.value.norm().to_string());
  try {
    auto c = canonical_rep(s.value, s.meridian, names);
    r.add("symmetric", c.value.to_string(c.names(names)));
    r.add("half_shift", c.half_shifted);
  } catch (const NotSymmetrizable&) {
    r.add("symmetric", "none");
  }
  return Ok;
}

bool d_squared_zero(const FloerComplex& c) {
  std::size_t n = c.generators.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      int s = 0;
      for (std::size_t j = 0; j < n; ++j) s ^= c.differential[i][j] & c.differential[j][k];
      if (s) return false;
    }
  return true;
}

// Chi and class table in printable form, with the meridian in the same group.
struct DiagramChi {
  GroupRingElem chi;
  GroupElem meridian;
  RingNames names;
  EulerCharResult euler;
  KnotHomology homology;
};

DiagramChi diagram_chi(const OneOneDiagram& d) {
  validate(d);
  DiagramChi out{GroupRingElem(), GroupElem(), RingNames(), euler_char(d), knot_complement_homology(d)};
  if (out.euler.canonical) {
    const auto& c = *out.euler.canonical;
    out.chi = c.value;
    out.meridian = c.lattice ? c.lattice->embed(out.homology.meridian) : out.homology.meridian;
    out.names = out.euler.names;
  } else {
    out.chi = out.euler.raw;
    out.meridian = out.homology.meridian;
    out.names = RingNames::defaults(out.chi.group());
  }
  return out;
}

int hfk11_report(std::string_view text, Report& r) {
  auto d = OneOneDiagram::parse(text);
  auto dc = diagram_chi(d);
  auto complex = differential(d);
  auto khi = khi_certificate(d);
  const FinAbGroup& g = dc.chi.group();
  bool d2 = d_squared_zero(complex);
  r.add("p", d.p);
  r.add("group", dc.homology.group.to_string());
  r.add("h1_order", dc.homology.h1_order);
  r.add("generators", static_cast<Int>(complex.generators.size()));
  r.add("dimension", dc.euler.total_dimension);
  r.add("chi", dc.chi.to_string(dc.names));
  r.add("symmetric", dc.euler.canonical.has_value());
  r.add("meridian", mono(g, dc.meridian, dc.names));
  for (const auto& [cls, dim] : dc.euler.hfk_table) r.add("hfk[" + mono(g, cls, dc.names) + "]", dim);
  r.add("khi_upper", khi.upper);
  r.add("khi_lower", khi.lower);
  r.add("certified", khi.certified);
  r.add("d_squared_zero", d2);
  bool bound = khi.upper >= khi.lower;
  r.add("bound", bound ? "ok" : "fails");
  return d2 && bound ? Ok : Violation;
}

int crosscheck_report(std::string_view text, Report& r) {
  auto d = OneOneDiagram::parse(text);
  validate(d);
  auto e = euler_char(d);
  auto pres = knot_group_presentation(d);
  auto s = sutured_torsion(pres);
  RingNames names = RingNames::defaults(e.raw.group());
  r.add("p", d.p);
  std::string flat;
  std::istringstream lines(pres.to_string());
  for (std::string l; std::getline(lines, l);)
    if (!trim(l).empty()) flat += (flat.empty() ? "" : "; ") + std::string(trim(l));
  r.add("presentation", flat);
  r.add("group", e.raw.group().to_string());
  r.add("diagram_chi", e.chi.normal_form().to_string(names));
  bool same_group = s.group == e.raw.group();
  r.add("fox_chi", PmClass(s.value).normal_form().to_string(RingNames::defaults(s.group)));
  r.add("fox_column", static_cast<Int>(s.column));
  r.add("fox_route", route_name(s.route));
  bool equal = same_group && pm_equal(s.value, e.raw);
  r.add("same_group", same_group);
  r.add("equal", equal);
  return equal ? Ok : Violation;
}

int decomp_report(std::string_view text, Report& r) {
  auto f = parse_gre(text);
  EnhancedChi e(f.element, f.meridian);
  auto rep = report(e);
  std::size_t rank = f.group.rank();
  RingNames free_names = slice(f.names, 0, rank);
  RingNames tors_names = slice(f.names, rank, f.group.num_torsion());
  r.add("group", f.group.to_string());
  r.add("element", f.element.to_string(f.names));
  if (f.meridian) r.add("meridian", mono(f.group, *f.meridian, f.names));
  r.add("norm_en", rep.norm_en.to_string());
  r.add("chi_gr", rep.chi_gr.to_string(free_names));
  r.add("norm_gr", rep.norm_gr.to_string());
  FinAbGroup tors = torsion_projection(f.group).target();
  for (const auto& [cls, part] : rep.per_torsion)
    r.add("part[" + mono(tors, cls, tors_names) + "]", part.to_string(f.names));
  if (!f.dim) return Ok;
  auto b = bound_chain(*f.dim, e);
  r.add("dim", *f.dim);
  r.add("bound", b.ok ? std::string("ok") : "fails-" + b.failing);
  r.add("tight_first", b.tight_first);
  r.add("tight_second", b.tight_second);
  return b.ok ? Ok : Violation;
}

bool has_extension(std::string_view name, std::string_view ext) {
  return name.size() >= ext.size() && name.substr(name.size() - ext.size()) == ext;
}

int detect_report(std::string_view name, std::string_view text, Report& r) {
  DetectionInput in;
  RingNames names;
  if (has_extension(name, ".od")) {
    auto dc = diagram_chi(OneOneDiagram::parse(text));
    if (!dc.euler.canonical) throw InvalidInput("diagram chi is not symmetrizable");
    in = detection_input(dc.chi, dc.euler.hfk_table, dc.meridian);
    names = dc.names;
  } else {
    auto f = parse_det(text);
    in = f.input;
    names = f.names;
  }
  Int total = 0;
  for (const auto& c : in.cosets) total += c.dim;
  r.add("group", in.group.to_string());
  r.add("meridian", mono(in.group, in.meridian, names));
  r.add("h1_order", in.h1_order);
  r.add("cosets", static_cast<Int>(in.cosets.size()));
  r.add("dimension", total);
  auto v = classify(in);
  r.add("verdict", v.to_string());
  if (v.kind == Verdict::Kind::GenusOneFibred || v.kind == Verdict::Kind::FibredGenusN) r.add("genus", v.genus);
  if (v.kind == Verdict::Kind::Inconsistent) r.add("reason", v.reason);
  return v.kind == Verdict::Kind::Inconsistent ? Inconsistent : Ok;
}

template <class Fn>
Result guarded(Report r, Format f, Fn&& fn) {
  Result out;
  try {
    out.exit_code = fn(r);
  } catch (const DiagramError& e) {
    r.add("error", e.name());
    r.add("invariant", e.invariant());
    r.add("message", e.what());
    out.exit_code = InputError;
  } catch (const Error& e) {
    r.add("error", e.name());
    r.add("message", e.what());
    out.exit_code = InputError;
  } catch (const std::exception& e) {
    r.add("error", "Internal");
    r.add("message", e.what());
    out.exit_code = InputError;
  }
  r.add("status", status_name(out.exit_code));
  out.output = r.render(f);
  return out;
}

}  // namespace

Result run_text(std::string_view command, std::string_view name, std::string_view text, Format f) {
  Report r;
  r.add("command", std::string(command));
  r.add("input", std::string(name));
  return guarded(std::move(r), f, [&](Report& rep) -> int {
    if (command == "torsion") return torsion_report(text, rep);
    if (command == "hfk11") return hfk11_report(text, rep);
    if (command == "crosscheck") return crosscheck_report(text, rep);
    if (command == "decomp") return decomp_report(text, rep);
    if (command == "detect") return detect_report(name, text, rep);
    throw InvalidInput("unknown command '" + std::string(command) + "'");
  });
}

Result run_window(const WindowParams& w, Format f) {
  Report r;
  r.add("command", "window");
  return guarded(std::move(r), f, [&](Report& rep) -> int {
    w.check();
    rep.add("q", w.q);
    rep.add("chi_plus", w.chi_bar_plus);
    rep.add("n", w.n);
    rep.add("tau[+]", static_cast<Int>(w.tau_plus));
    rep.add("tau[-]", static_cast<Int>(w.tau_minus));
    for (const auto& [k, t] : w.tau) rep.add("tau[" + std::to_string(k) + "]", static_cast<Int>(t));
    auto c = window_constants(w);
    auto put = [&](const std::string& j, const Bounds& b) {
      rep.add("i_max[" + j + "]", b.i_max);
      rep.add("i_min[" + j + "]", b.i_min);
    };
    put("+", c.plus);
    put("-", c.minus);
    put(std::to_string(w.n), c.at_n);
    put(std::to_string(w.n + 1), c.at_next);
    rep.add("P", c.P);
    rep.add("rho", c.rho);
    rep.add("Q", c.Q);
    rep.add("valid", c.valid);
    bool all = true;
    for (const auto& id : identity_suite(w)) {
      rep.add("identity[" + id.name + "]", std::string(id.holds ? "holds" : "FAILS") + "  " + id.detail);
      all = all && id.holds;
    }
    try {
      auto b = block_sums(w, w.n);
      auto join = [](const std::array<Int, 5>& a) {
        std::string s;
        for (Int v : a) s += (s.empty() ? "" : " ") + std::to_string(v);
        return s;
      };
      rep.add("blocks_first", join(b.first));
      rep.add("blocks_second", join(b.second));
      rep.add("total_first", b.total_first);
      rep.add("total_second", b.total_second);
      rep.add("expected", b.expected);
      rep.add("window_length", b.window_length);
    } catch (const NegativeBlock& e) {
      rep.add("blocks", std::string("NegativeBlock: ") + e.what());
    }
    return all ? Ok : Violation;
  });
}

std::string command_for(const std::filesystem::path& p) {
  auto ext = p.extension().string();
  if (ext == ".gp") return "torsion";
  if (ext == ".od") return "hfk11";
  if (ext == ".gre") return "decomp";
  if (ext == ".det") return "detect";
  return "";
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::filesystem::path Cache::default_dir() {
  if (const char* e = std::getenv("SUTURED_CACHE_DIR"); e && *e) return e;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "sutured";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "sutured";
  return ".sutured-cache";
}

std::string Cache::key(std::string_view command, std::string_view options, std::string_view input) {
  std::string blob = "sutured ";
  blob += kVersion;
  blob += '\0';
  blob += command;
  blob += '\0';
  blob += options;
  blob += '\0';
  blob += input;
  return sha256_hex(blob);
}

namespace {

std::string record_header() { return std::string("sutured-cache ") + kVersion + "\n"; }

}  // namespace

std::optional<Result> Cache::get(const std::string& key) const {
  std::ifstream in(dir_ / (key + ".rec"), std::ios::binary);
  if (!in) return std::nullopt;
  std::string header, exit_line;
  if (!std::getline(in, header) || header + "\n" != record_header()) return std::nullopt;
  if (!std::getline(in, exit_line) || exit_line.rfind("exit ", 0) != 0) return std::nullopt;
  Result r;
  try {
    r.exit_code = static_cast<int>(parse_int(exit_line.substr(5)));
  } catch (const ParseError&) {
    return std::nullopt;
  }
  std::ostringstream rest;
  rest << in.rdbuf();
  r.output = rest.str();
  return r;
}

void Cache::put(const std::string& key, const Result& r) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) return;
  thread_local std::mt19937_64 rng(std::random_device{}() ^ std::hash<std::thread::id>{}(std::this_thread::get_id()));
  auto tmp = dir_ / (key + ".tmp" + std::to_string(rng()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return;
    out << record_header() << "exit " << r.exit_code << "\n" << r.output;
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      return;
    }
  }
  std::filesystem::rename(tmp, dir_ / (key + ".rec"), ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

Result run_file(std::string_view command, const std::filesystem::path& path, Format f, const Cache* cache) {
  std::string name = path.filename().string();
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    Report r;
    r.add("command", std::string(command));
    r.add("input", name);
    return guarded(std::move(r), f, [&](Report&) -> int { throw InvalidInput("cannot read " + path.string()); });
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::string options = name + (f == Format::Kv ? "\nkv" : "\ntext");
  std::string key;
  if (cache) {
    key = Cache::key(command, options, text);
    if (auto hit = cache->get(key)) return *hit;
  }
  Result r = run_text(command, name, text, f);
  if (cache) cache->put(key, r);
  return r;
}

BatchResult run_batch(const std::filesystem::path& dir, const BatchOptions& opts) {
  if (!std::filesystem::is_directory(dir)) throw InvalidInput("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && !command_for(e.path()).empty()) files.push_back(e.path());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });

  BatchResult out;
  out.entries.resize(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();) {
      std::string cmd = command_for(files[i]);
      out.entries[i] = {files[i].filename().string(), cmd, run_file(cmd, files[i], opts.format, opts.cache)};
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (opts.out_dir) {
    std::filesystem::create_directories(*opts.out_dir);
    const char* ext = opts.format == Format::Kv ? ".kv" : ".txt";
    for (const auto& e : out.entries) {
      std::ofstream rec(*opts.out_dir / (e.file + ext), std::ios::binary);
      rec << e.result.output;
    }
  }

  Report summary;
  Int counts[4] = {0, 0, 0, 0};
  for (const auto& e : out.entries) {
    int code = std::clamp(e.result.exit_code, 0, 3);
    ++counts[code];
    out.exit_code = std::max(out.exit_code, code);
    summary.add(e.file, e.command + " " + status_name(code));
  }
  summary.add("jobs", static_cast<Int>(out.entries.size()));
  summary.add("ok", counts[Ok]);
  summary.add("violations", counts[Violation]);
  summary.add("inconsistent", counts[Inconsistent]);
  summary.add("input_errors", counts[InputError]);
  out.summary = summary.render(opts.format);
  return out;
}

}  // namespace sutured::cli
