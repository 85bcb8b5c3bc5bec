#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "widthlab/error.hpp"
#include "widthlab/gamma.hpp"
#include "widthlab/semisimple.hpp"
#include "widthlab/subgroups.hpp"
#include "widthlab/suites.hpp"
#include "widthlab/words.hpp"

#ifndef WIDTHLAB_VERSION
#define WIDTHLAB_VERSION "0.0.0"
#endif

namespace widthlab::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Globals {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::uint64_t limit_elements = ElementTable::kDefaultLimit;
  std::uint64_t budget_evals = 100'000'000;
  double time_budget = 0;
  std::string format = "json";
  std::string output;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Element tables with an optional on-disk cache.

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string normalized_spec(std::string_view spec) {
  std::string out;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

TablePtr load_table(const std::string& spec, const Globals& g, std::ostream& err) {
  Group group = parse_group(spec);
  const char* dir = std::getenv("WIDTHLAB_CACHE_DIR");
  if (!dir || !*dir) return ElementTable::enumerate(group, g.limit_elements);
  std::ostringstream name;
  name << "table-" << std::hex << fnv1a(normalized_spec(spec)) << ".wlt";
  std::filesystem::path path = std::filesystem::path(dir) / name.str();
  if (std::ifstream in{path}) {
    try {
      auto t = ElementTable::load(in, group);
      if (t->order() <= g.limit_elements) return t;
    } catch (const InputError& e) {
      err << "warning: ignoring cache file " << path.string() << ": " << e.what() << "\n";
    }
  }
  auto t = ElementTable::enumerate(group, g.limit_elements);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream outf(tmp);
    if (outf) t->save(outf);
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) err << "warning: could not write cache file " << path.string() << "\n";
  return t;
}

// ---------------------------------------------------------------------------
// Input parsing helpers.

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::size_t> parse_indices(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::string norm = text;
  for (char& c : norm)
    if (c == ' ') c = ',';
  for (const auto& part : split(norm, ',')) {
    auto p = trim(part);
    if (p.empty()) continue;
    // "i*n" repeats i n times.
    auto number = [&](const std::string& digits) {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(digits, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != digits.size() || digits[0] == '-')
        throw InputError(std::string("bad ") + what + " entry '" + p + "'");
      return static_cast<std::size_t>(v);
    };
    auto star = p.find('*');
    std::size_t reps = 1;
    if (star != std::string::npos) {
      reps = number(trim(p.substr(star + 1)));
      if (reps > 100000) throw InputError(std::string("repeat count too large in '") + p + "'");
    }
    std::size_t v = number(trim(p.substr(0, star)));
    out.insert(out.end(), reps, v);
  }
  return out;
}

Automorphism conjugation(const TablePtr& t, const std::string& cycles) {
  std::string c = trim(cycles);
  if (c.empty() || c == "()" || c == "id") return Automorphism::identity(t);
  return Automorphism::from_conjugation(t, Permutation::from_cycles(t->degree(), c));
}

// "sigma;comp_0;...;comp_{r-1}" with sigma the images of 0..r-1 and comps
// conjugating permutations; missing comps are the identity.
Actor parse_actor(const TablePtr& t, std::size_t r, const std::string& text) {
  auto parts = split(text, ';');
  auto sigma = parse_indices(parts[0], "sigma");
  if (sigma.empty()) {
    sigma.resize(r);
    for (std::size_t i = 0; i < r; ++i) sigma[i] = i;
  }
  if (sigma.size() != r) throw InputError("actor '" + text + "' does not have " + std::to_string(r) + " copies");
  std::vector<Automorphism> comps;
  for (std::size_t i = 0; i < r; ++i) comps.push_back(conjugation(t, i + 1 < parts.size() ? parts[i + 1] : ""));
  if (parts.size() > r + 1) throw InputError("actor '" + text + "' has too many components");
  return Actor(sigma, comps);
}

NElem parse_kappa(const ElementTable& t, std::size_t r, const std::string& text) {
  auto ids = parse_indices(text, "kappa");
  if (ids.size() != r) throw InputError("kappa needs " + std::to_string(r) + " entries");
  NElem k;
  for (auto id : ids) {
    if (id >= t.order()) throw InputError("kappa entry " + std::to_string(id) + " is not an element id");
    k.push_back(static_cast<ElemId>(id));
  }
  return k;
}

Json to_json(const MetricValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

// ---------------------------------------------------------------------------
// Commands. Each returns the reports and the exit code.

struct Outcome {
  std::vector<Json> reports;
  int code = kExitOk;
};

Json base_report(const std::string& command, const Globals& g) {
  Json j;
  j["command"] = command;
  j["seed"] = g.seed;
  return j;
}

Json globals_echo(const Globals& g) {
  Json j;
  j["seed"] = g.seed;
  j["jobs"] = g.jobs;
  j["limit_elements"] = g.limit_elements;
  j["budget_evals"] = g.budget_evals;
  if (g.time_budget > 0) j["time_budget"] = g.time_budget;
  return j;
}

Outcome cmd_info(const std::vector<std::string>& groups, const Globals& g, std::ostream& err) {
  Outcome o;
  for (const auto& spec : groups) {
    auto t = load_table(spec, g, err);
    auto full = ElementSet::full(t);
    Json j = base_report("info", g);
    j["group"] = spec;
    j["name"] = t->name();
    j["order"] = t->order();
    j["degree"] = t->degree();
    j["generators"] = t->num_generators();
    auto derived = derived_subgroup(full);
    j["derived_order"] = derived.size();
    j["perfect"] = derived.size() == t->order();
    j["soluble"] = is_soluble(full);
    j["centre_order"] = centre(t).size();
    j["classes"] = conjugacy_classes(t).size();
    if (auto q = find_qmn(full)) {
      j["qmn_kind"] = q->kind == QmnKind::Soluble ? "soluble" : "quasi-semisimple";
      j["qmn_order"] = q->n.size();
      j["qmn_z_order"] = q->z.size();
    } else {
      j["qmn_kind"] = "none";
    }
    j["inputs"] = globals_echo(g);
    j["inputs"]["groups"] = Json::array({spec});
    o.reports.push_back(std::move(j));
  }
  return o;
}

Outcome cmd_width(const std::vector<std::string>& groups, const std::string& word_text, std::uint64_t samples,
                  const Globals& g, std::ostream& err) {
  Outcome o;
  Word w = Word::parse(word_text);
  for (const auto& spec : groups) {
    auto t = load_table(spec, g, err);
    ValueSetOptions vo;
    vo.budget_evals = g.budget_evals;
    vo.seed = g.seed;
    if (samples) vo.samples = samples;
    auto ww = word_width(t, w, vo, g.jobs);
    Json j = base_report("width", g);
    j["group"] = spec;
    j["order"] = t->order();
    j["word"] = w.to_string();
    j["width"] = ww.width.width;
    j["frontiers"] = ww.width.frontiers;
    j["verbal_order"] = ww.verbal_order;
    j["value_set_size"] = ww.values.set.size();
    j["sampled"] = ww.values.sampled;
    j["evaluations"] = ww.values.evaluations;
    j["inputs"] = globals_echo(g);
    j["inputs"]["groups"] = Json::array({spec});
    j["inputs"]["word"] = word_text;
    if (samples) j["inputs"]["samples"] = samples;
    o.reports.push_back(std::move(j));
  }
  return o;
}

Outcome cmd_twisted_width(const std::string& spec, const std::vector<std::string>& pair_texts, bool certify,
                          const Globals& g, std::ostream& err) {
  auto t = load_table(spec, g, err);
  std::vector<std::pair<Automorphism, Automorphism>> pairs;
  std::vector<Automorphism> gens;
  for (const auto& p : pair_texts) {
    auto parts = split(p, '|');
    if (parts.size() != 2) throw InputError("pair '" + p + "' must have the form alpha|beta");
    pairs.emplace_back(conjugation(t, parts[0]), conjugation(t, parts[1]));
    gens.push_back(pairs.back().first);
    gens.push_back(pairs.back().second);
  }
  if (pairs.empty()) throw InputError("at least one --pair is required");
  auto tw = twisted_width(t, pairs);
  Outcome o;
  Json j = base_report("twisted-width", g);
  j["group"] = spec;
  j["order"] = t->order();
  j["pairs"] = pair_texts;
  j["covered"] = tw.covered;
  j["width"] = tw.t;
  j["layer_sizes"] = tw.layer_sizes;
  j["reached_fraction"] = tw.reached_fraction;
  if (certify) {
    auto group = automorphism_closure(t, gens);
    auto cert = certify_twisted_width(t, group);
    j["certificate_D"] = cert.D;
    j["certificate_min_size"] = cert.min_size;
    j["certificate_pairs"] = cert.pairs_checked;
  }
  j["inputs"] = globals_echo(g);
  j["inputs"]["group"] = spec;
  j["inputs"]["pairs"] = pair_texts;
  j["inputs"]["certify"] = certify;
  o.reports.push_back(std::move(j));
  return o;
}

Outcome cmd_power_cover(const std::string& spec, std::size_t q, std::size_t copies, std::size_t max_m,
                        const Globals& g, std::ostream& err) {
  auto t = load_table(spec, g, err);
  if (q == 0) throw InputError("q must be positive");
  Outcome o;
  Json j = base_report("power-cover", g);
  j["group"] = spec;
  j["order"] = t->order();
  j["q"] = q;
  if (copies) {
    std::vector<Automorphism> betas(copies, Automorphism::identity(t));
    auto cover = power_twist_cover(t, betas, std::vector<std::size_t>(copies, q), g.budget_evals, g.seed);
    j["copies"] = copies;
    j["found"] = cover.found;
    j["twists"] = cover.twists;
    j["attempts"] = cover.attempts;
    j["reached"] = cover.reached;
  } else {
    std::size_t m = empirical_M(t, q, max_m, g.budget_evals);
    j["M"] = m;
    j["found"] = m != 0;
    j["max_m"] = max_m;
  }
  j["inputs"] = globals_echo(g);
  j["inputs"]["group"] = spec;
  j["inputs"]["q"] = q;
  if (copies) j["inputs"]["copies"] = copies;
  o.reports.push_back(std::move(j));
  return o;
}

struct SolveArgs {
  std::string kind;
  std::string group;
  std::size_t copies = 1;
  std::vector<std::string> actors;
  std::string slots;      // commutator g / power h
  std::vector<std::string> pairs;
  std::size_t q = 2;
  std::size_t D = 0;
  std::size_t M = 0;
  std::vector<std::string> kappas;
  std::uint64_t trials = 10;
};

Outcome cmd_solve(const SolveArgs& a, const Globals& g, std::ostream& err) {
  auto t = load_table(a.group, g, err);
  if (a.copies == 0) throw InputError("copies must be positive");
  SemisimpleAction act{t, a.copies, {}};
  for (const auto& s : a.actors) act.actors.push_back(parse_actor(t, a.copies, s));
  if (act.actors.empty()) act.actors.push_back(Actor::identity(t, a.copies));
  act.validate();

  std::vector<NElem> kappas;
  for (const auto& k : a.kappas) kappas.push_back(parse_kappa(*t, a.copies, k));
  std::mt19937_64 rng(g.seed);
  if (kappas.empty())
    for (std::uint64_t i = 0; i < a.trials; ++i) kappas.push_back(n_random(*t, a.copies, rng));

  Json j = base_report("solve", g);
  j["kind"] = a.kind;
  j["group"] = a.group;
  j["copies"] = a.copies;
  std::size_t verified = 0;
  Json solutions = Json::array();
  auto record = [&](const NElem& kappa, bool ok, const Json& sol) {
    if (ok) ++verified;
    if (solutions.size() < 5) solutions.push_back(Json{{"kappa", kappa}, {"verified", ok}, {"solution", sol}});
  };

  if (a.kind == "commutator") {
    auto slots = parse_indices(a.slots, "slot");
    for (auto s : slots)
      if (s >= act.actors.size()) throw InputError("slot refers to a missing actor");
    CommutatorSolver solver(act, slots, a.D);
    j["D"] = solver.report().D;
    j["cycle_sum"] = solver.report().cycle_sum;
    j["bound"] = solver.report().bound;
    j["substitutions"] = solver.report().substitutions;
    for (const auto& kappa : kappas) {
      auto u = solver.solve(kappa);
      NElem prod = act.identity();
      for (std::size_t i = 0; i < slots.size(); ++i) prod = act.mul(prod, act.commutator(u[i], act.actors[slots[i]]));
      record(kappa, prod == kappa, u);
    }
  } else if (a.kind == "power") {
    EffectiveConstants c;
    c.D = a.D ? a.D : 1;
    c.M = a.M ? a.M : empirical_M(t, a.q);
    if (c.M == 0) throw PreconditionError("no power-twist cover found for this q");
    auto h = parse_indices(a.slots, "slot");
    for (auto s : h)
      if (s >= act.actors.size()) throw InputError("slot refers to a missing actor");
    PowerSolver solver(act, h, a.q, c, true, g.seed);
    j["q"] = a.q;
    j["M"] = c.M;
    j["z"] = solver.report().z;
    j["type_one"] = solver.report().type_one;
    j["type_two"] = solver.report().type_two;
    for (const auto& kappa : kappas) {
      auto sol = solver.solve(kappa);
      // prod (a_i h_i)^q = kappa prod h_i^q in N x| Aut(N).
      GElem lhs = g_from_n(t, act.identity()), rhs = g_from_n(t, kappa);
      for (std::size_t i = 0; i < h.size(); ++i) {
        GElem hi = g_from_actor(act.actors[h[i]]);
        lhs = g_mul(lhs, g_pow(g_mul(g_from_n(t, sol[i]), hi), static_cast<long long>(a.q)));
        rhs = g_mul(rhs, g_pow(hi, static_cast<long long>(a.q)));
      }
      record(kappa, solver.psi(sol) == kappa && lhs.n == rhs.n && g_action(lhs) == g_action(rhs), sol);
    }
  } else if (a.kind == "twisted") {
    std::vector<std::pair<Actor, Actor>> pairs;
    for (const auto& p : a.pairs) {
      auto ids = parse_indices(p, "pair");
      if (ids.size() != 2 || ids[0] >= act.actors.size() || ids[1] >= act.actors.size())
        throw InputError("pair '" + p + "' must name two actors");
      pairs.emplace_back(act.actors[ids[0]], act.actors[ids[1]]);
    }
    if (pairs.empty()) throw InputError("at least one --pair is required");
    TwistedSystemSolver solver(t, a.copies, pairs, a.D);
    j["width"] = solver.width();
    bool certs = true;
    for (const auto& c : solver.certificates()) certs = certs && c.balanced && c.class_two_ok && c.parameters_ok;
    j["certificates"] = solver.certificates().size();
    j["certificates_ok"] = certs;
    for (const auto& kappa : kappas) {
      auto sol = solver.solve(kappa);
      NElem prod = act.identity();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        NElem tw = act.mul(act.mul(act.inv(sol.x[i]), act.inv(sol.y[i])),
                           act.mul(pairs[i].first.apply(sol.x[i]), pairs[i].second.apply(sol.y[i])));
        prod = act.mul(prod, tw);
      }
      record(kappa, prod == kappa, Json{{"x", sol.x}, {"y", sol.y}});
    }
    if (!certs) verified = 0;
  } else {
    throw UsageError("unknown solve kind '" + a.kind + "' (commutator, power, twisted)");
  }
  j["kappas"] = kappas.size();
  j["verified"] = verified;
  j["pass"] = verified == kappas.size();
  j["solutions"] = solutions;
  j["inputs"] = globals_echo(g);
  j["inputs"]["kind"] = a.kind;
  j["inputs"]["group"] = a.group;
  j["inputs"]["copies"] = a.copies;
  j["inputs"]["actors"] = a.actors;
  j["inputs"]["slots"] = a.slots;
  j["inputs"]["pairs"] = a.pairs;
  j["inputs"]["q"] = a.q;
  j["inputs"]["D"] = a.D;
  j["inputs"]["M"] = a.M;
  j["inputs"]["kappas"] = a.kappas;
  j["inputs"]["trials"] = a.trials;
  Outcome o;
  o.code = verified == kappas.size() ? kExitOk : kExitInvariantFailure;
  o.reports.push_back(std::move(j));
  return o;
}

Outcome cmd_reduce(const std::string& text, int m, int n, std::size_t k, const Globals& g) {
  GammaWord v = GammaWord::parse(text);
  GammaWord h = hat(v);
  Json j = base_report("reduce", g);
  j["word"] = v.to_string();
  j["reduced"] = free_reduce(v).to_string();
  j["hat"] = h.to_string();
  j["balanced"] = is_balanced(h);
  j["support"] = h.variable_support().size();
  j["colour_type"] = colour_type(h);
  j["below_L"] = leq_Ln(colour_type(h), m, n);
  Outcome o;
  if (k > 0) {
    auto r = extract_k_twisted(v, m, n, k);
    Json steps = Json::array();
    GammaWord prod;
    for (const auto& s : r.steps) {
      steps.push_back(Json{{"a", s.a.to_string()}, {"b", s.b.to_string()}, {"xi", s.xi.to_string()},
                           {"eta", s.eta.to_string()}});
      prod *= twisted_commutator(s.a, s.b, s.xi, s.eta);
    }
    bool identity = equals_in_F(v, prod * r.rest);
    bool cert = true;
    try {
      replay_certificate(r.certificate);
    } catch (const InvariantError&) {
      cert = false;
    }
    j["steps"] = steps;
    j["rest"] = r.rest.to_string();
    j["rest_support"] = hat(r.rest).variable_support().size();
    j["identity_verified"] = identity;
    j["certificate_verified"] = cert;
    j["fallback_choices"] = r.fallback_choices;
    if (!identity || !cert) o.code = kExitInvariantFailure;
  }
  j["inputs"] = globals_echo(g);
  j["inputs"]["word"] = text;
  j["inputs"]["m"] = m;
  j["inputs"]["n"] = n;
  j["inputs"]["k"] = k;
  o.reports.push_back(std::move(j));
  return o;
}

Outcome cmd_verify(const std::vector<std::string>& names, std::optional<std::uint64_t> trials, const Globals& g,
                   std::ostream& err) {
  Outcome o;
  for (const auto& name : names) {
    auto canon = canonical_suite(name);
    if (!canon) throw UsageError("unknown suite '" + name + "'");
    SuiteOptions so;
    so.seed = g.seed;
    so.trials = trials;
    so.jobs = g.jobs;
    so.budget_evals = g.budget_evals;
    so.time_budget_s = g.time_budget;
    auto r = run_suite(*canon, so);
    if (r.vacuous) err << "warning: suite " << r.suite << " ran with zero trials; vacuous pass\n";
    if (r.truncated)
      err << "warning: suite " << r.suite << " stopped by the time budget after " << r.checked << " of " << r.trials
          << " instances\n";
    Json j = base_report("verify", g);
    j["suite"] = r.suite;
    j["trials"] = r.trials;
    j["checked"] = r.checked;
    j["passed"] = r.passed;
    j["failed"] = r.checked - r.passed;
    j["pass"] = r.pass;
    j["vacuous"] = r.vacuous;
    j["truncated"] = r.truncated;
    j["failures"] = r.failures;
    Json metrics = Json::object();
    for (const auto& m : r.metrics) metrics[m.key] = to_json(m.value);
    j["metrics"] = metrics;
    j["inputs"] = globals_echo(g);
    j["inputs"]["suite"] = name;
    if (trials) j["inputs"]["trials"] = *trials;
    if (r.passed != r.checked) o.code = kExitInvariantFailure;
    o.reports.push_back(std::move(j));
  }
  return o;
}

// ---------------------------------------------------------------------------
// Output.

bool is_scalar(const Json& v) { return v.is_primitive() && !v.is_null(); }

std::string scalar_text(const Json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    for (char& c : s)
      if (c == '\t' || c == '\n') c = ' ';
    return s;
  }
  return v.dump();
}

void emit(const std::vector<Json>& reports, const std::string& format, std::ostream& out) {
  if (format == "json") {
    for (const auto& r : reports) out << r.dump() << "\n";
    return;
  }
  if (reports.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : reports.front().items())
    if (is_scalar(v)) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "\t" : "") << keys[i];
  out << "\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      out << (i ? "\t" : "");
      if (r.contains(keys[i]) && is_scalar(r[keys[i]])) out << scalar_text(r[keys[i]]);
    }
    out << "\n";
  }
}

Json error_object(const std::string& command, const std::string& type, const std::string& message) {
  Json j;
  j["command"] = command;
  j["error"] = Json{{"type", type}, {"message", message}};
  j["version"] = WIDTHLAB_VERSION;
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Desk-scale computational group theory lab", "widthlab"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key=value configuration file");
  app.set_version_flag("--version", WIDTHLAB_VERSION);

  Globals g;
  std::optional<std::uint64_t> trials;
  app.add_option("--seed", g.seed, "Random seed (recorded in every report)");
  app.add_option("--jobs", g.jobs, "Worker threads for data-parallel steps")->check(CLI::Range(1u, 256u));
  app.add_option("--limit-elements", g.limit_elements, "Largest group order to enumerate")->check(CLI::PositiveNumber);
  app.add_option("--budget-evals", g.budget_evals, "Evaluation budget for searches")->check(CLI::PositiveNumber);
  app.add_option("--time-budget", g.time_budget, "Seconds before suites stop with truncated results")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
  app.add_option("--output", g.output, "Write reports to this file instead of stdout");
  app.add_option("--trials", trials, "Trials for verify and random kappas for solve");

  std::vector<std::string> groups;
  auto* info = app.add_subcommand("info", "Order and structure of groups");
  info->add_option("groups", groups, "Group specs")->required();

  std::string word;
  std::uint64_t samples = 0;
  auto* width = app.add_subcommand("width", "Exact width of a word map");
  width->add_option("groups", groups, "Group specs")->required();
  width->add_option("--word", word, "Word, e.g. [x1,x2] or x1^2")->required();
  width->add_option("--samples", samples, "Evaluate this many random tuples instead of all");

  std::string group;
  std::vector<std::string> pair_texts;
  bool certify = false;
  auto* twisted = app.add_subcommand("twisted-width", "Width of products of twisted-commutator sets");
  twisted->add_option("group", group, "Group spec")->required();
  twisted->add_option("--pair", pair_texts, "alpha|beta as conjugating permutations, e.g. '(0 1)|()'");
  twisted->add_flag("--certify", certify, "Certify a width bound over the generated automorphism group");

  std::size_t q = 2, copies = 0, max_m = 6;
  auto* cover = app.add_subcommand("power-cover", "Search for power-twist covers");
  cover->add_option("group", group, "Group spec")->required();
  cover->add_option("--q", q, "Exponent");
  cover->add_option("--copies", copies, "Fixed number of factors (default: smallest that works)");
  cover->add_option("--max-m", max_m, "Largest number of factors tried");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve commutator, power or twisted equations in S^r");
  solve->add_option("kind", sa.kind, "commutator, power or twisted")->required();
  solve->add_option("group", sa.group, "Group spec of S")->required();
  solve->add_option("--copies", sa.copies, "Number of copies r");
  solve->add_option("--actor", sa.actors, "Actor 'sigma;comp_0;...' (repeatable, indexed from 0)");
  solve->add_option("--slots", sa.slots, "Actor index per slot (g for commutators, h for powers); i*n repeats");
  solve->add_option("--pair", sa.pairs, "Twisted pair 'i,j' of actor indices (repeatable)");
  solve->add_option("--q", sa.q, "Exponent for power equations");
  solve->add_option("--D", sa.D, "Width constant (0: certify)");
  solve->add_option("--M", sa.M, "Power-cover constant (0: search)");
  solve->add_option("--kappa", sa.kappas, "Target as element ids, one per copy (repeatable)");

  std::string gamma_word;
  int m = 2, n = 2;
  std::size_t k = 0;
  auto* reduce = app.add_subcommand("reduce", "Free Gamma-group rewriting and twisted-commutator extraction");
  reduce->add_option("word", gamma_word, "Gamma-word, e.g. 'x1#1 x2#2 x1#1^-1 x2#2^-1'")->required();
  reduce->add_option("--m", m, "Number of colours");
  reduce->add_option("--n", n, "Repetitions in L_n");
  reduce->add_option("--k", k, "Twisted commutators to extract");

  std::vector<std::string> suites;
  auto* verify = app.add_subcommand("verify", "Run named invariant suites");
  verify->add_option("suites", suites, "Suite names")->required();

  std::string command = "widthlab";
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << WIDTHLAB_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    out << error_object(command, "usage", e.what()).dump() << "\n";
    return kExitUsage;
  }
  if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    if (*info) o = cmd_info(groups, g, err);
    else if (*width) o = cmd_width(groups, word, samples, g, err);
    else if (*twisted) o = cmd_twisted_width(group, pair_texts, certify, g, err);
    else if (*cover) o = cmd_power_cover(group, q, copies, max_m, g, err);
    else if (*solve) {
      if (trials) sa.trials = *trials;
      o = cmd_solve(sa, g, err);
    } else if (*reduce) o = cmd_reduce(gamma_word, m, n, k, g);
    else if (*verify) o = cmd_verify(suites, trials, g, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    if (*verify) {
      err << "suites:";
      for (const auto& s : suite_names()) err << " " << s;
      err << " (alias: hamidoune)\n";
    }
    out << error_object(command, "usage", e.what()).dump() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << "\n";
    out << error_object(command, "invariant", e.what()).dump() << "\n";
    return kExitInvariantFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    out << error_object(command, "input", e.what()).dump() << "\n";
    return kExitInputError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    out << error_object(command, "precondition", e.what()).dump() << "\n";
    return kExitInputError;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    out << error_object(command, "capacity", e.what()).dump() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    out << error_object(command, "internal", e.what()).dump() << "\n";
    return kExitInputError;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : o.reports) {
    r["elapsed_ms"] = elapsed;
    r["version"] = WIDTHLAB_VERSION;
  }
  if (!g.output.empty()) {
    std::ofstream f(g.output);
    if (!f) {
      err << "error: cannot write " << g.output << "\n";
      out << error_object(command, "input", "cannot write " + g.output).dump() << "\n";
      return kExitInputError;
    }
    emit(o.reports, g.format, f);
  } else {
    emit(o.reports, g.format, out);
  }
  return o.code;
}

}  // namespace widthlab::cli
