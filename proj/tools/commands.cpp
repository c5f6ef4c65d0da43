#include "commands.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "dscrypt/errors.hpp"
#include "dscrypt/numtheory.hpp"
#include "filemode.hpp"

namespace dscrypt::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const MessageCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    err << "error: malformed key bundle: " << e.what() << "\n";
    return kConfigError;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InvalidSpec("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view data) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidSpec("cannot write " + p.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

std::string summary(const PolyMap& m) {
  return "degree " + std::to_string(m.degree()) + " density " + std::to_string(m.density());
}

// certificate or the power at which the claim broke
struct CertOutcome {
  bool valid = false;
  std::string text;
  std::string detail;
};

template <class F>
CertOutcome certify(F&& run) {
  CertOutcome o;
  try {
    auto cert = run();
    o.valid = cert.valid;
    o.text = cert.to_text();
    o.detail = "max degree " + std::to_string(cert.max_degree) + " over powers 1.." + std::to_string(cert.powers_checked);
  } catch (const DegreeExceeded& e) {
    o.text = std::string("certificate.valid=false\ncertificate.error=") + e.what() + "\n";
    o.detail = e.what();
  }
  return o;
}

PolyMap load_map(const fs::path& p) { return PolyMap::parse(read_file(p)); }

}  // namespace

// ------------------------------------------------------------------ keygen

int cmd_keygen(const Config& c, const KeygenOptions& o, std::ostream& out) {
  const Resolved r = resolve(c);
  SeedStream root(r.seed);
  auto session = root.fork("session");
  auto alice = root.fork("alice");
  auto tools_rng = root.fork("tools");
  auto family_rng = root.fork("family");

  const auto keys = twisted_keygen(r.ring, r.k, session);
  const std::uint64_t kA = r.exponents.sample(r.ring, r.k, alice);
  const std::uint64_t rA = r.exponents.sample(r.ring, r.k, alice);
  const std::vector<AffineMap> conj{keys.secret.T};
  const auto tools = make_tools(r.ring, r.k, tools_rng, conj);

  FamilySpec spec = r.family;
  if (spec.terminal == TerminalKind::kGeneralAffine) spec.terminal_map = affine_sample_invertible(r.ring, r.k, family_rng);
  const auto member = generate_stable_family_member(spec, family_rng);

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  struct Artifact {
    const char* name;
    const PolyMap* map;
    int claimed;
  };
  const Artifact arts[] = {{"G", &keys.pub.G, 2},   {"H", &keys.pub.H, 2}, {"H_inverse", &keys.pub.H_inverse, 2},
                           {"P", &tools.P, 2},      {"Q", &tools.Q, 2},    {"family", &member.map, spec.degree}};
  std::string certs;
  bool all = true;
  for (const auto& a : arts) {
    write_file(dir / (std::string(a.name) + ".map"), a.map->to_text());
    CertOutcome cert = a.map == &member.map ? certify([&] { return check_key_stability(member.key, a.claimed, 10); })
                                            : certify([&] { return check_stability(*a.map, a.claimed, 10); });
    certs += "[" + std::string(a.name) + "]\n" + cert.text;
    all = all && cert.valid;
    out << a.name << ".map " << summary(*a.map) << " certificate " << verdict(cert.valid) << " (" << cert.detail << ")\n";
  }
  write_file(dir / "family.key", member.key.to_text());
  write_file(dir / "certificates.txt", certs);

  json bundle;
  bundle["ring"] = r.ring->descriptor();
  bundle["k"] = r.k;
  bundle["seed"] = r.seed;
  bundle["T"] = keys.secret.T.to_polymap().to_text();
  bundle["a"] = keys.secret.a.to_text();
  bundle["b"] = keys.secret.b.to_text();
  bundle["kA"] = kA;
  bundle["rA"] = rA;
  bundle["T1"] = tools.T1.to_polymap().to_text();
  bundle["T2"] = tools.T2.to_polymap().to_text();
  bundle["tools_b"] = tools.b.to_text();
  bundle["tools_c"] = tools.c.to_text();
  bundle["P_inverse"] = tools.P_inverse.to_text();
  bundle["Q_inverse"] = tools.Q_inverse.to_text();
  bundle["family_density_range"] = {member.density_low, member.density_high};
  write_file(dir / "alice.json", bundle.dump(2) + "\n");
  out << "family density " << member.map.density() << " in [" << member.density_low << ", " << member.density_high
      << "]\n";
  out << "wrote " << dir.string() << "\n";
  return all ? kOk : kVerificationFailure;
}

// ----------------------------------------------------------- protocol-sim

int cmd_protocol_sim(const Config& c, const SimOptions& o, std::ostream& out) {
  if (!o.transcript_in.empty()) {
    const auto received = Transcript::parse(read_file(o.transcript_in));
    const auto t0 = Clock::now();
    const auto mm = replay_and_compare(received);
    out << "replayed " << received.records().size() << " records in " << std::fixed << std::setprecision(3)
        << seconds_since(t0) << " s\n";
    if (mm) {
      out << "FAIL transcript " << mm->message() << "\n";
      return kVerificationFailure;
    }
    out << "PASS transcript matches replay\n";
    return kOk;
  }
  const Resolved r = resolve(c);
  SimConfig sc;
  sc.ring = r.ring;
  sc.k = r.k;
  sc.seed = r.seed;
  sc.exponents = r.exponents;
  sc.password = r.password;
  sc.cap_constant = r.cap_constant;
  sc.messages = o.messages;
  const Scheme scheme = parse_scheme(o.scheme);
  const auto t0 = Clock::now();
  const auto result = simulate_protocol(scheme, sc);
  const double elapsed = seconds_since(t0);
  out << "scheme=" << to_string(scheme) << " ring=" << r.ring->descriptor() << " k=" << r.k
      << " n=" << schubert_dimension(r.k) << " seed=" << r.seed << "\n";
  for (const auto& ch : result.checks) out << verdict(ch.pass) << " " << ch.name << " " << ch.detail << "\n";
  out << "records " << result.transcript.records().size() << ", elapsed " << std::fixed << std::setprecision(3)
      << elapsed << " s\n";
  if (!o.transcript_out.empty()) write_file(o.transcript_out, result.transcript.to_text());
  out << "verdict " << verdict(result.pass()) << "\n";
  return result.pass() ? kOk : kVerificationFailure;
}

// ------------------------------------------------------ encrypt / decrypt

int cmd_encrypt(const Config& c, const FileOptions& o, std::ostream& out) {
  const Resolved r = resolve(c);
  const fs::path dir(o.key_dir);
  SessionCipher cipher({load_map(dir / "P.map"), load_map(dir / "Q.map")}, r.password, r.cap_constant);
  const std::string plain = read_file(o.in);
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(plain.data());
  const auto t0 = Clock::now();
  const std::string ct = encrypt_bytes({bytes, plain.size()}, cipher);
  write_file(o.out, ct);
  out << "encrypted " << plain.size() << " bytes in " << cipher.counter() << " blocks (cap " << cipher.cap() << ", "
      << std::fixed << std::setprecision(3) << seconds_since(t0) << " s)\n";
  return kOk;
}

int cmd_decrypt(const Config& c, const FileOptions& o, std::ostream& out) {
  const Resolved r = resolve(c);
  const fs::path dir(o.key_dir);
  const json bundle = json::parse(read_file(dir / "alice.json"));
  const SessionCipher cipher({load_map(dir / "P.map"), load_map(dir / "Q.map")}, r.password, r.cap_constant,
                             {PolyMap::parse(bundle.at("P_inverse").get<std::string>()),
                              PolyMap::parse(bundle.at("Q_inverse").get<std::string>())});
  const auto t0 = Clock::now();
  const auto plain = decrypt_bytes(read_file(o.in), cipher);
  write_file(o.out, {reinterpret_cast<const char*>(plain.data()), plain.size()});
  out << "decrypted " << plain.size() << " bytes (" << std::fixed << std::setprecision(3) << seconds_since(t0)
      << " s)\n";
  return kOk;
}

// ------------------------------------------------------------------ verify

namespace {

struct Report {
  std::ostream& out;
  bool failed = false;
  void line(const char* status, const std::string& name, const std::string& detail) {
    out << status << " " << name << " " << detail << "\n";
  }
  void check(bool ok, const std::string& name, const std::string& detail) {
    failed = failed || !ok;
    line(verdict(ok), name, detail);
  }
};

PolyMap unstable_map(const RingPtr& ring, std::size_t n) {
  std::vector<Polynomial> cs;
  for (std::size_t i = 0; i < n; ++i) cs.push_back(Polynomial::variable(ring, n, static_cast<std::uint32_t>(i)));
  const auto x1 = Polynomial::variable(ring, n, 0), x2 = Polynomial::variable(ring, n, 1);
  cs[0] = x1 + x2 * x2;
  cs[1] = x2 + x1 * x1;
  return PolyMap(ring, std::move(cs));
}

void verify_stability(const Resolved& r, const VerifyOptions& o, SeedStream& rng, Report& rep) {
  int worst = 0;
  bool ok = true;
  for (std::size_t i = 0; i < o.samples; ++i) {
    auto f = generate_stable_group_element(r.ring, r.k, rng, default_terminal(r.ring)).first;
    auto cert = certify([&] { return check_stability(f, 2, 10); });
    ok = ok && cert.valid;
    worst = std::max(worst, f.degree());
  }
  rep.check(ok, "stability.group_elements",
            std::to_string(o.samples) + " elements of E_k, degree <= 2 for powers 1..10");

  FamilySpec spec = r.family;
  if (spec.terminal == TerminalKind::kGeneralAffine) spec.terminal_map = affine_sample_invertible(r.ring, r.k, rng);
  const auto m = generate_stable_family_member(spec, rng);
  const auto fam = certify([&] { return check_key_stability(m.key, spec.degree, 10); });
  const bool in_range = m.map.density() >= m.density_low && m.map.density() <= m.density_high;
  rep.check(fam.valid && m.map.degree() == spec.degree && in_range, "stability.family",
            "T=" + std::to_string(spec.degree) + " " + summary(m.map) + " range [" + std::to_string(m.density_low) +
                ", " + std::to_string(m.density_high) + "], " + fam.detail);

  const auto keys = twisted_keygen(r.ring, r.k, rng);
  const auto conj = certify([&] { return check_stability(keys.pub.G, 2, 10); });
  rep.check(conj.valid, "stability.conjugated", summary(keys.pub.G) + ", " + conj.detail);

  const auto bad = certify([&] { return check_stability(unstable_map(r.ring, schubert_dimension(r.k)), 2, 10); });
  rep.check(!bad.valid, "stability.negative_control", "unstable map rejected: " + bad.detail);
  if (o.inject_unstable) rep.check(bad.valid, "stability.injected_unstable", bad.detail);
}

void verify_orders(const Resolved& r, SeedStream& rng, Report& rep) {
  const std::uint64_t q = r.ring->size();
  if (r.ring->is_field()) {
    for (std::size_t k = 2; k <= r.k; ++k) {
      const std::uint64_t qk = nt::checked_pow(q, static_cast<unsigned>(k));
      if (qk == 0 || qk > (std::uint64_t{1} << 16)) {
        rep.line("SKIP", "orders.singer_k" + std::to_string(k), "q^k above 2^16");
        continue;
      }
      const auto order = matrix_order(singer_cycle(r.ring, k).matrix(), qk - 1);
      rep.check(order == qk - 1, "orders.singer_k" + std::to_string(k),
                "order " + std::to_string(order) + ", expected " + std::to_string(qk - 1));
    }
  } else {
    rep.line("SKIP", "orders.singer", r.ring->descriptor() + " is not a field");
  }
  auto [f, key] = generate_stable_group_element(r.ring, r.k, rng, default_terminal(r.ring));
  const auto proj = projection_order(key);
  if (!proj) {
    rep.line("SKIP", "orders.projection", "K^k above the brute-force guard");
    return;
  }
  if (r.ring->is_field()) {
    const std::uint64_t qk = nt::checked_pow(q, static_cast<unsigned>(r.k));
    rep.check(*proj == qk - 1, "orders.projection", "order " + std::to_string(*proj) + " of the Singer terminal colour");
  } else {
    rep.line("PASS", "orders.projection", "order " + std::to_string(*proj) + " of the affine terminal colour");
  }
  const std::uint64_t points = nt::checked_pow(q, static_cast<unsigned>(f.dimension()));
  if (points == 0 || points > (std::uint64_t{1} << 20)) {
    rep.line("SKIP", "orders.full_permutation", "K^n above the brute-force guard");
    return;
  }
  const BigInt order = map_order_bruteforce(f);
  rep.check(order % *proj == 0, "orders.full_permutation",
            "order " + order.str() + " is a multiple of " + std::to_string(*proj));
}

// colours with a few random terms of degree <= 2, invertible affine last colour
SymbolicKey random_quadratic_key(const RingPtr& ring, std::size_t k, std::size_t length, SeedStream& rng) {
  std::vector<SymbolicColour> colours;
  for (std::size_t c = 0; c + 1 < length; ++c) {
    SymbolicColour colour;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Term> terms;
      for (int t = 0; t < 3; ++t) {
        std::vector<std::uint32_t> e(k, 0);
        for (auto d = rng.uniform(3); d > 0; --d) e[rng.uniform(k)]++;
        terms.push_back({Monomial::from_exponents(e), ring->sample(rng)});
      }
      colour.push_back(Polynomial::from_terms(ring, k, std::move(terms)));
    }
    colours.push_back(std::move(colour));
  }
  colours.push_back(colour_from_affine(affine_sample_invertible(ring, k, rng)));
  return SymbolicKey(ring, k, std::move(colours));
}

void verify_homomorphism(const Resolved& r, const VerifyOptions& o, SeedStream& rng, Report& rep) {
  const std::size_t len = 2 * r.family.half_length;
  bool hom = true, inv = true;
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto a = random_quadratic_key(r.ring, r.k, len, rng);
    const auto b = generate_stable_group_element(r.ring, r.k, rng, TerminalKind::kGeneralAffine).second;
    hom = hom && eta(key_product(a, b)) == map_compose(eta(a), eta(b));
    hom = hom && eta(key_product(b, a)) == map_compose(eta(b), eta(a));
    inv = inv && map_compose(eta(a), eta(key_inverse(a))).is_identity();
  }
  rep.check(hom, "homomorphism.product", std::to_string(2 * o.samples) + " key pairs, eta(ab) = eta(a) eta(b)");
  rep.check(inv, "homomorphism.inverse", std::to_string(o.samples) + " keys, eta(a) eta(a^-1) = id");
}

}  // namespace

int cmd_verify(const Config& c, const VerifyOptions& o, std::ostream& out) {
  const Resolved r = resolve(c);
  const std::string& s = o.scope;
  if (s != "all" && s != "stability" && s != "orders" && s != "homomorphism") {
    throw InvalidSpec("unknown verify scope '" + s + "' (stability, orders, homomorphism, all)");
  }
  out << "seed=" << r.seed << " ring=" << r.ring->descriptor() << " k=" << r.k << " scope=" << s << "\n";
  Report rep{out};
  SeedStream root(r.seed);
  auto st = root.fork("stability"), ord = root.fork("orders"), hom = root.fork("homomorphism");
  if (s == "all" || s == "stability") verify_stability(r, o, st, rep);
  if (s == "all" || s == "orders") verify_orders(r, ord, rep);
  if (s == "all" || s == "homomorphism") verify_homomorphism(r, o, hom, rep);
  out << "verdict " << verdict(!rep.failed) << "\n";
  return rep.failed ? kVerificationFailure : kOk;
}

// ------------------------------------------------------------------- bench

namespace {

struct Slope {
  double slope = 0;
  double half_width = 0;  // 95% confidence half-width, NaN with two points
};

Slope loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  Slope s;
  if (m < 2) return s;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  s.slope = sxy / sxx;
  if (m < 3) {
    s.half_width = std::nan("");
    return s;
  }
  double ssr = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = std::log(y[i]) - (my + s.slope * (std::log(x[i]) - mx));
    ssr += e * e;
  }
  const double se = std::sqrt(ssr / static_cast<double>(m - 2) / sxx);
  const boost::math::students_t t(static_cast<double>(m - 2));
  s.half_width = boost::math::quantile(boost::math::complement(t, 0.025)) * se;
  return s;
}

template <class F>
double best_of(std::size_t repeats, F&& f) {
  double best = 1e300;
  for (std::size_t i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return std::max(best, 1e-9);
}

std::string slope_text(const Slope& s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << s.slope;
  if (std::isnan(s.half_width)) os << " (two points, no interval)";
  else os << " +/- " << s.half_width << " (95%)";
  return os.str();
}

}  // namespace

int cmd_bench(const Config& c, const BenchOptions& o, std::ostream& out) {
  const Resolved r = resolve(c);
  if (o.k_min < 2 || o.k_max < o.k_min) throw InvalidSpec("bench needs 2 <= k-min <= k-max");
  SeedStream rng(r.seed);
  std::vector<double> ns, compose_t, eval_terms, eval_t, conj_n, conj_t;
  out << "ring " << r.ring->descriptor() << ", degree-2 elements of E_k, best of " << o.repeats << "\n";
  out << std::setw(3) << "k" << std::setw(5) << "n" << std::setw(9) << "density" << std::setw(8) << "terms"
      << std::setw(14) << "compose_ms" << std::setw(14) << "power64_ms" << std::setw(14) << "apply_us"
      << std::setw(16) << "conj_compose_ms" << "\n";
  for (std::size_t k = o.k_min; k <= o.k_max; ++k) {
    const std::size_t n = schubert_dimension(k);
    auto f = generate_stable_group_element(r.ring, k, rng, default_terminal(r.ring)).first;
    const double tc = best_of(o.repeats, [&] { (void)map_compose(f, f); });
    const double tp = best_of(o.repeats, [&] { (void)map_power(f, 64); });
    MapEvaluator ev(f);
    std::vector<Code> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = r.ring->sample(rng);
    constexpr int kApplications = 2000;
    const double te = best_of(o.repeats, [&] {
                        for (int i = 0; i < kApplications; ++i) {
                          ev.apply(x, y);
                          std::swap(x, y);
                        }
                      }) / kApplications;
    ns.push_back(static_cast<double>(n));
    compose_t.push_back(tc);
    eval_terms.push_back(static_cast<double>(f.total_terms()));
    eval_t.push_back(te);
    std::string conj = "-";
    if (k <= o.conjugated_k_max) {
      const auto G = map_conjugate(affine_sample_invertible(r.ring, n, rng), f);
      const double tg = best_of(o.repeats, [&] { (void)map_compose(G, G); });
      conj_n.push_back(static_cast<double>(n));
      conj_t.push_back(tg);
      std::ostringstream os;
      os << std::fixed << std::setprecision(3) << tg * 1e3;
      conj = os.str();
    }
    out << std::setw(3) << k << std::setw(5) << n << std::setw(9) << f.density() << std::setw(8) << f.total_terms()
        << std::fixed << std::setprecision(3) << std::setw(14) << tc * 1e3 << std::setw(14) << tp * 1e3
        << std::setw(14) << te * 1e6 << std::setw(16) << conj << "\n";
  }
  if (conj_n.size() >= 2) {
    out << "composition slope, conjugated quadratic maps (log time vs log n): " << slope_text(loglog_slope(conj_n, conj_t))
        << "; paper exponent 5\n";
  }
  out << "composition slope, E_k elements (log time vs log n): " << slope_text(loglog_slope(ns, compose_t)) << "\n";
  out << "application slope (log time vs log n*density): " << slope_text(loglog_slope(eval_terms, eval_t))
      << "; O(n*density) predicts 1\n";
  return kOk;
}

}  // namespace dscrypt::cli
