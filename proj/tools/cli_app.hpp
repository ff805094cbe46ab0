#pragma once

// Command layer of the partlat CLI. Everything writes to the given streams and
// returns an exit code, so tests can drive it in-process.

#include <charconv>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "partlat/partlat.hpp"

namespace partlat::cli {

using Json = nlohmann::ordered_json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_resource = 3;

inline constexpr const char* schema_version = "1";

using CountEngine = std::function<CountResult(const CountQuery&, const Limits&)>;

/// The two rank/size engines behind red-count and red-table. Tests swap in
/// broken ones to exercise the disagreement exit.
struct Engines {
  CountEngine oracle;
  CountEngine recursive;
};

inline Engines default_engines() {
  return {
      [](const CountQuery& q, const Limits& limits) {
        return CountResult{count_rank_size_oracle(q, limits), Engine::oracle};
      },
      [](const CountQuery& q, const Limits& limits) {
        auto r = count_rank_size_recursive(q, limits);
        return CountResult{std::move(r.value), r.engine};
      },
  };
}

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

/// Counts as JSON numbers when they fit in 64 bits, decimal strings otherwise.
inline Json count_json(const BigCount& v) {
  if (v >= 0) {
    if (auto u = to_u64(v)) return *u;
  } else if (v >= BigCount(std::numeric_limits<std::int64_t>::min())) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Optional element names given with --labels.
class Labels {
 public:
  Labels() = default;
  explicit Labels(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty()) throw UsageError("empty name in --labels");
      for (std::size_t k = 0; k < i; ++k) {
        if (names_[k] == names_[i]) throw UsageError("repeated name '" + names_[i] + "' in --labels");
      }
    }
  }

  bool active() const { return !names_.empty(); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  Label resolve(std::string_view token) const {
    if (!active()) return partlat::detail::parse_label(token);
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == token) return static_cast<Label>(i);
    }
    throw Error(ErrorKind::parse, "unknown element '" + std::string(token) + "'");
  }

  std::string name(Label v) const {
    if (!active()) return std::to_string(v);
    if (v >= names_.size()) throw UsageError("--labels names fewer elements than the input uses");
    return names_[v];
  }

  std::string partition(const SetPartition& p) const {
    std::string out;
    for (std::size_t i = 0; i < p.block_count(); ++i) {
      if (i) out += '|';
      const auto& block = p.blocks()[i];
      for (std::size_t k = 0; k < block.size(); ++k) {
        if (k) out += ',';
        out += name(block[k]);
      }
    }
    return out;
  }

  std::string atom(const Atom& a) const { return name(a.a) + "-" + name(a.b); }

  std::string atoms(std::span<const Atom> list) const {
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) out += ',';
      out += atom(list[i]);
    }
    return out;
  }

  SetPartition parse_partition(const std::string& text) const {
    SetPartition p = partlat::parse_partition(text, [this](std::string_view t) { return resolve(t); });
    if (active() && p.ground_size() != size()) {
      throw UsageError("partition covers " + std::to_string(p.ground_size()) + " elements but --labels names " +
                       std::to_string(size()));
    }
    return p;
  }

  std::vector<Atom> parse_atoms(const std::string& text) const {
    return parse_edge_list(text, [this](std::string_view t) { return resolve(t); });
  }

 private:
  std::vector<std::string> names_;
};

inline std::uint64_t parse_u64(const std::string& name, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw UsageError(name + " must be a non-negative integer, got '" + text + "'");
  }
  return v;
}

/// PARTLAT_* variables override the ceilings. Each override is echoed.
inline Json apply_env(const EnvLookup& env, Limits& limits, SuiteCeilings& ceilings) {
  Json echo = Json::object();
  auto field = [&](const char* name, auto& target) {
    if (auto v = env(name)) {
      const std::uint64_t value = parse_u64(name, *v);
      target = static_cast<std::remove_reference_t<decltype(target)>>(value);
      echo[name] = value;
    }
  };
  field("PARTLAT_MAX_PARTITION_N", limits.max_partition_n);
  field("PARTLAT_MAX_COMPONENT_EDGES", limits.max_component_edges);
  field("PARTLAT_MAX_FORESTS", limits.max_forests);
  field("PARTLAT_MAX_PATHS", limits.max_paths);
  field("PARTLAT_MAX_ORACLE_SUBSETS", limits.max_oracle_subsets);
  field("PARTLAT_MAX_REACHABLE", limits.max_reachable);
  field("PARTLAT_MAX_CLASS_EDGES", limits.max_class_edges);
  field("PARTLAT_MAX_CUT_SETS", limits.max_cut_sets);
  field("PARTLAT_MAX_CONNECTED_SETS", limits.max_connected_sets);
  field("PARTLAT_SINGLE_SCAN_N", ceilings.single_scan_n);
  field("PARTLAT_PAIR_SCAN_N", ceilings.pair_scan_n);
  field("PARTLAT_TRIPLE_SCAN_N", ceilings.triple_scan_n);
  field("PARTLAT_SAMPLED_TRIPLE_N", ceilings.sampled_triple_n);
  field("PARTLAT_SAMPLED_TRIPLES", ceilings.sampled_triples);
  field("PARTLAT_SEED", ceilings.seed);
  field("PARTLAT_MAP_SCAN_N", ceilings.map_scan_n);
  field("PARTLAT_MONOID_SCAN_N", ceilings.monoid_scan_n);
  return echo;
}

inline Json witness_json(const Witness& w, const Labels& labels) {
  Json out = Json::object();
  Json parts = Json::array();
  for (const auto& p : w.partitions) parts.push_back(labels.partition(p));
  Json sets = Json::array();
  for (const auto& s : w.atom_sets) sets.push_back(labels.atoms(s));
  Json counts = Json::array();
  for (const auto& c : w.counts) counts.push_back(count_json(c));
  out["partitions"] = std::move(parts);
  out["atom_sets"] = std::move(sets);
  out["counts"] = std::move(counts);
  out["note"] = w.note;
  return out;
}

inline Json report_json(const PropertyReport& r, const Labels& labels) {
  Json out = Json::object();
  out["property"] = r.property;
  out["n"] = r.n;
  out["holds"] = r.holds;
  out["expected"] = r.expected ? Json(*r.expected) : Json(nullptr);
  out["passed"] = r.passed();
  out["checked"] = r.checked;
  out["violations"] = r.violations;
  out["bound"] = r.bound ? count_json(*r.bound) : Json(nullptr);
  out["witness"] = r.witness ? witness_json(*r.witness, labels) : Json(nullptr);
  out["skipped"] = r.skipped ? Json(*r.skipped) : Json(nullptr);
  out["note"] = r.note;
  return out;
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name.
class App {
 public:
  App(std::ostream& out, std::ostream& err, Engines engines = default_engines(), EnvLookup env = process_env)
      : out_(out), err_(err), engines_(std::move(engines)), env_(std::move(env)) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Atomic decompositions in the partition lattice", "partlat"};
    app.fallthrough();
    app.require_subcommand(1);
    std::string labels_text;
    app.add_option("--labels", labels_text, "Comma-separated element names, mapped to 0,1,...");

    // enumerate
    std::size_t enum_n = 0;
    std::optional<std::uint64_t> enum_limit;
    auto* enumerate = app.add_subcommand("enumerate", "List Pi(n) in restricted-growth order");
    enumerate->add_option("n", enum_n, "Ground-set size")->required();
    enumerate->add_option("--limit", enum_limit, "Print at most this many partitions");

    // nmin
    std::string nmin_text;
    std::string convention = "zero";
    auto* nmin = app.add_subcommand("nmin", "Number of minimal atomic decompositions");
    nmin->add_option("partition", nmin_text, "Partition, e.g. 0,1|2")->required();
    nmin->add_option("--convention", convention, "Value for the finest partition")
        ->check(CLI::IsMember({"zero", "empty-product"}));

    // metric
    std::string metric_p;
    std::string metric_q;
    auto* metric = app.add_subcommand("metric", "d(p,q) = N(p) + N(q) - 2 N(p meet q)");
    metric->add_option("p", metric_p)->required();
    metric->add_option("q", metric_q)->required();

    // decomps
    std::string decomps_text;
    bool minimal_only = false;
    std::optional<std::uint64_t> decomps_limit;
    auto* decomps = app.add_subcommand("decomps", "List atomic decompositions");
    decomps->add_option("partition", decomps_text)->required();
    decomps->add_flag("--minimal-only", minimal_only, "Only minimal decompositions (spanning forests)");
    decomps->add_option("--limit", decomps_limit, "Emit at most this many records");

    // red-count and red-table share the red-set options
    std::optional<std::size_t> red_n;
    std::string reds_text;
    std::string engine = "recursive";
    std::size_t rank_j = 0;
    std::size_t size_s = 0;
    std::string pivot_text;
    bool literal = false;
    std::string format = "json";
    bool nonempty_joins = false;
    auto red_options = [&](CLI::App* sub) {
      sub->add_option("--n", red_n, "Ground-set size (defaults to the number of --labels)");
      sub->add_option("--reds", reds_text, "Red atoms, e.g. 0-1,1-2")->required();
      sub->add_option("--engine", engine, "oracle, recursive or both")
          ->check(CLI::IsMember({"oracle", "recursive", "both"}));
    };
    auto* red_count = app.add_subcommand("red-count", "Partitions of rank j that are joins of s red atoms");
    red_options(red_count);
    red_count->add_option("--rank", rank_j, "Rank j")->required();
    red_count->add_option("--size", size_s, "Number of red atoms s")->required();
    red_count->add_option("--pivot", pivot_text, "Also split the count by this red atom");
    red_count->add_flag("--literal", literal, "Evaluate the literal recursion step at the pivot");
    auto* red_table = app.add_subcommand("red-table", "Full (j, s) table for a red atom set");
    red_options(red_table);
    red_table->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    red_table->add_flag("--nonempty-joins", nonempty_joins, "Leave the empty join out of the reachable count");

    // check
    std::size_t check_n = 0;
    std::string properties_text;
    auto* check = app.add_subcommand("check", "Run the property suite at size n");
    check->add_option("n", check_n)->required();
    check->add_option("--properties", properties_text, "Comma-separated property names (default: all)");

    // export-dot
    std::string dot_partition;
    std::string dot_format = "dot";
    auto* export_dot = app.add_subcommand("export-dot", "Graphviz rendering of G_pi or G_R");
    auto* dot_p = export_dot->add_option("--partition", dot_partition, "Render G_pi for this partition");
    export_dot->add_option("--n", red_n, "Ground-set size for --reds");
    auto* dot_r = export_dot->add_option("--reds", reds_text, "Render G_R for these red atoms");
    dot_p->excludes(dot_r);
    export_dot->add_option("--format", dot_format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

    try {
      std::vector<std::string> argv_storage;
      argv_storage.reserve(args.size() + 1);
      argv_storage.emplace_back("partlat");
      argv_storage.insert(argv_storage.end(), args.begin(), args.end());
      std::vector<char*> argv;
      for (auto& a : argv_storage) argv.push_back(a.data());
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return exit_ok;
    } catch (const CLI::ParseError& e) {
      err_ << "partlat: " << e.what() << "\n";
      return exit_usage;
    }

    try {
      overrides_ = detail::apply_env(env_, limits_, ceilings_);
      if (!labels_text.empty()) {
        std::vector<std::string> names;
        for (auto part : partlat::detail::split(labels_text, ',')) {
          names.emplace_back(partlat::detail::trim(part));
        }
        labels_ = detail::Labels(std::move(names));
      }
      if (*enumerate) return cmd_enumerate(enum_n, enum_limit);
      if (*nmin) return cmd_nmin(nmin_text, convention);
      if (*metric) return cmd_metric(metric_p, metric_q);
      if (*decomps) return cmd_decomps(decomps_text, minimal_only, decomps_limit);
      if (*red_count) {
        return cmd_red_count(red_ground_size(red_n), reds_text, rank_j, size_s, engine, pivot_text, literal);
      }
      if (*red_table) return cmd_red_table(red_ground_size(red_n), reds_text, engine, format, nonempty_joins);
      if (*check) return cmd_check(check_n, properties_text);
      if (*export_dot) {
        if (dot_partition.empty() && !*dot_r) throw detail::UsageError("export-dot needs --partition or --reds");
        if (!dot_partition.empty()) return cmd_export_dot_partition(dot_partition, dot_format);
        return cmd_export_dot_reds(red_ground_size(red_n), reds_text, dot_format);
      }
      throw detail::UsageError("no subcommand");
    } catch (const detail::UsageError& e) {
      err_ << "partlat: usage: " << e.what() << "\n";
      return exit_usage;
    } catch (const Error& e) {
      err_ << "partlat: " << e.what() << "\n";
      return e.kind() == ErrorKind::resource_limit ? exit_resource : exit_usage;
    }
  }

 private:
  std::size_t red_ground_size(const std::optional<std::size_t>& n) const {
    if (n && labels_.active() && *n != labels_.size()) {
      throw detail::UsageError("--n " + std::to_string(*n) + " disagrees with " +
                               std::to_string(labels_.size()) + " names in --labels");
    }
    if (n) return *n;
    if (labels_.active()) return labels_.size();
    throw detail::UsageError("--n is required without --labels");
  }

  Json inputs() const {
    Json in = Json::object();
    if (labels_.active()) in["labels"] = labels_.names();
    if (!overrides_.empty()) in["overrides"] = overrides_;
    return in;
  }

  void emit(const std::string& command, Json in, Json result, Json provenance) {
    Json envelope = Json::object();
    envelope["schema_version"] = schema_version;
    envelope["command"] = command;
    envelope["inputs"] = std::move(in);
    envelope["result"] = std::move(result);
    envelope["provenance"] = std::move(provenance);
    out_ << envelope.dump(2) << "\n";
  }

  int cmd_enumerate(std::size_t n, const std::optional<std::uint64_t>& limit) {
    if (labels_.active() && labels_.size() != n) {
      throw detail::UsageError("n " + std::to_string(n) + " disagrees with --labels");
    }
    std::uint64_t count = 0;
    Json parts = Json::array();
    for_each_partition(
        n,
        [&](const SetPartition& p) {
          if (!limit || count < *limit) parts.push_back(labels_.partition(p));
          ++count;
          return true;
        },
        limits_);
    Json in = inputs();
    in["n"] = n;
    if (limit) in["limit"] = *limit;
    Json result = Json::object();
    result["count"] = count;
    result["partitions"] = std::move(parts);
    result["truncated"] = limit && count > *limit;
    emit("enumerate", std::move(in), std::move(result), {{"count", to_string(Engine::oracle)}});
    return exit_ok;
  }

  int cmd_nmin(const std::string& text, const std::string& convention) {
    const SetPartition p = labels_.parse_partition(text);
    const auto conv = convention == "zero" ? FinestConvention::zero : FinestConvention::empty_product;
    const BigCount closed = nmin_closed_form(p, conv);
    std::optional<BigCount> oracle;
    std::optional<std::string> skipped;
    if (closed > BigCount(limits_.max_forests)) {
      skipped = "closed form exceeds forest ceiling " + std::to_string(limits_.max_forests);
    } else {
      try {
        oracle = nmin_oracle(p, limits_);
        if (rank(p) == 0 && conv == FinestConvention::empty_product) oracle = BigCount(1);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::resource_limit) throw;
        skipped = e.what();
      }
    }
    Json in = inputs();
    in["partition"] = labels_.partition(p);
    in["n"] = p.ground_size();
    in["convention"] = convention;
    Json result = Json::object();
    result["closed_form"] = count_json(closed);
    result["oracle"] = oracle ? count_json(*oracle) : Json(nullptr);
    result["agree"] = oracle ? Json(*oracle == closed) : Json(nullptr);
    result["oracle_skipped"] = skipped ? Json(*skipped) : Json(nullptr);
    Json sizes = Json::array();
    for (std::size_t s : block_sizes(p)) sizes.push_back(s);
    result["block_sizes"] = std::move(sizes);
    emit("nmin", std::move(in), std::move(result),
         {{"closed_form", to_string(Engine::closed_form)}, {"oracle", to_string(Engine::oracle)}});
    return oracle && *oracle != closed ? exit_failure : exit_ok;
  }

  int cmd_metric(const std::string& p_text, const std::string& q_text) {
    const SetPartition p = labels_.parse_partition(p_text);
    const SetPartition q = labels_.parse_partition(q_text);
    if (p.ground_size() != q.ground_size()) {
      throw detail::UsageError("partitions have different ground sets (" + std::to_string(p.ground_size()) +
                               " vs " + std::to_string(q.ground_size()) + " elements)");
    }
    const SetPartition m = meet(p, q);
    const SetPartition jn = join(p, q);
    Json in = inputs();
    in["p"] = labels_.partition(p);
    in["q"] = labels_.partition(q);
    in["n"] = p.ground_size();
    Json result = Json::object();
    result["d"] = count_json(metric_d(p, q));
    result["meet"] = labels_.partition(m);
    result["join"] = labels_.partition(jn);
    result["nmin_p"] = count_json(nmin_closed_form(p));
    result["nmin_q"] = count_json(nmin_closed_form(q));
    result["nmin_meet"] = count_json(nmin_closed_form(m));
    result["nmin_join"] = count_json(nmin_closed_form(jn));
    result["supermodularity_gap"] = count_json(supermodularity_gap(p, q));
    const auto cf = to_string(Engine::closed_form);
    emit("metric", std::move(in), std::move(result),
         {{"d", cf},
          {"nmin_p", cf},
          {"nmin_q", cf},
          {"nmin_meet", cf},
          {"nmin_join", cf},
          {"supermodularity_gap", cf}});
    return exit_ok;
  }

  int cmd_decomps(const std::string& text, bool minimal_only, const std::optional<std::uint64_t>& limit) {
    const SetPartition p = labels_.parse_partition(text);
    Json records = Json::array();
    std::uint64_t emitted = 0;
    bool truncated = false;
    std::optional<std::string> reason;
    auto visit = [&](const AtomicDecomposition& d) {
      if (limit && emitted >= *limit) {
        truncated = true;
        reason = "--limit " + std::to_string(*limit);
        return false;
      }
      Json rec = Json::object();
      rec["atoms"] = labels_.atoms(d.atoms());
      rec["size"] = d.size();
      rec["minimal"] = is_minimal(d);
      records.push_back(std::move(rec));
      ++emitted;
      return true;
    };
    bool hit_ceiling = false;
    try {
      if (minimal_only) {
        for_each_minimal_decomposition(p, visit, {.emit_empty_for_finest = false}, limits_);
      } else {
        for_each_atomic_decomposition(p, visit, limits_);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::resource_limit) throw;
      truncated = true;
      hit_ceiling = true;
      reason = e.what();
    }
    Json total = nullptr;
    Engine total_engine = Engine::closed_form;
    if (minimal_only) {
      total = count_json(nmin_closed_form(p));
    } else {
      total_engine = Engine::oracle;
      try {
        total = count_json(count_all_decompositions(p, limits_));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::resource_limit) throw;
      }
    }
    Json in = inputs();
    in["partition"] = labels_.partition(p);
    in["n"] = p.ground_size();
    in["minimal_only"] = minimal_only;
    if (limit) in["limit"] = *limit;
    Json summary = Json::object();
    summary["emitted"] = emitted;
    summary["total"] = std::move(total);
    summary["truncated"] = truncated;
    summary["reason"] = reason ? Json(*reason) : Json(nullptr);
    Json result = Json::object();
    result["records"] = std::move(records);
    result["summary"] = std::move(summary);
    emit("decomps", std::move(in), std::move(result), {{"total", to_string(total_engine)}});
    return hit_ceiling ? exit_resource : exit_ok;
  }

  RedAtomSet parse_reds(std::size_t n, const std::string& text) const {
    return RedAtomSet(n, labels_.parse_atoms(text));
  }

  Json red_inputs(const RedAtomSet& reds, const std::string& engine) const {
    Json in = inputs();
    in["n"] = reds.ground_size();
    in["reds"] = labels_.atoms(reds.atoms());
    in["engine"] = engine;
    return in;
  }

  struct Cell {
    CountResult primary;
    std::optional<CountResult> oracle;
    std::optional<CountResult> recursive;
    bool agree = true;
  };

  Cell evaluate(const CountQuery& q, const std::string& engine) const {
    Cell cell;
    if (engine == "oracle" || engine == "both") cell.oracle = engines_.oracle(q, limits_);
    if (engine == "recursive" || engine == "both") cell.recursive = engines_.recursive(q, limits_);
    cell.primary = cell.oracle ? *cell.oracle : *cell.recursive;
    if (cell.oracle && cell.recursive) cell.agree = cell.oracle->value == cell.recursive->value;
    return cell;
  }

  int cmd_red_count(std::size_t n, const std::string& reds_text, std::size_t j, std::size_t s,
                    const std::string& engine, const std::string& pivot_text, bool literal) {
    const RedAtomSet reds = parse_reds(n, reds_text);
    const CountQuery q(reds, j, s);
    std::optional<Atom> pivot;
    if (!pivot_text.empty()) {
      const auto parsed = labels_.parse_atoms(pivot_text);
      if (parsed.size() != 1) throw detail::UsageError("--pivot takes exactly one atom");
      pivot = parsed.front();
    } else if (literal) {
      if (reds.size() == 0) throw detail::UsageError("--literal needs a red atom to pivot on");
      pivot = reds.atoms().front();
    }
    const Cell cell = evaluate(q, engine);

    Json in = red_inputs(reds, engine);
    in["rank"] = j;
    in["size"] = s;
    if (pivot) in["pivot"] = labels_.atom(*pivot);
    in["literal"] = literal;
    Json result = Json::object();
    Json provenance = Json::object();
    result["count"] = count_json(cell.primary.value);
    result["engine"] = to_string(cell.primary.engine);
    provenance["count"] = to_string(cell.primary.engine);
    if (engine == "both") {
      result["oracle"] = count_json(cell.oracle->value);
      result["recursive"] = count_json(cell.recursive->value);
      result["agree"] = cell.agree;
      provenance["oracle"] = to_string(cell.oracle->engine);
      provenance["recursive"] = to_string(cell.recursive->engine);
    }
    if (pivot) {
      const SplitCounts split = split_by_atom(q, *pivot, limits_);
      Json sp = Json::object();
      sp["pivot"] = labels_.atom(*pivot);
      sp["with"] = count_json(split.with);
      sp["without"] = count_json(split.without);
      result["split"] = std::move(sp);
      provenance["split"] = to_string(Engine::oracle);
    }
    if (literal) {
      const LiteralStep step = evaluate_literal_step(q, *pivot, limits_);
      Json lit = Json::object();
      lit["rule"] = step.rule;
      lit["literal"] = step.skipped ? Json(nullptr) : count_json(step.literal);
      lit["oracle"] = count_json(step.oracle);
      lit["agrees"] = step.skipped ? Json(nullptr) : Json(step.agrees);
      lit["paths"] = step.paths;
      lit["cut_sets"] = step.cut_sets;
      lit["skipped"] = step.skipped ? Json(*step.skipped) : Json(nullptr);
      result["literal"] = std::move(lit);
      provenance["literal"] = to_string(Engine::oracle);
    }
    emit("red-count", std::move(in), std::move(result), std::move(provenance));
    if (!cell.agree) {
      err_ << "partlat: engines disagree: oracle " << cell.oracle->value << ", recursive "
           << cell.recursive->value << "\n";
      return exit_failure;
    }
    return exit_ok;
  }

  int cmd_red_table(std::size_t n, const std::string& reds_text, const std::string& engine,
                    const std::string& format, bool nonempty_joins) {
    const RedAtomSet reds = parse_reds(n, reds_text);
    struct Row {
      std::size_t j;
      std::size_t s;
      Cell cell;
    };
    std::vector<Row> rows;
    bool all_agree = true;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s <= reds.size(); ++s) {
        rows.push_back({j, s, evaluate(CountQuery(reds, j, s), engine)});
        all_agree = all_agree && rows.back().cell.agree;
      }
    }
    std::vector<BigCount> joins_by_size(reds.size() + 1);
    for (const Row& row : rows) joins_by_size[row.s] += row.cell.primary.value;

    const auto reachable = reachable_partitions(reds, {.nonempty_joins = nonempty_joins}, limits_);
    BigCount structured = quotient_count_structured(reds, limits_);
    if (nonempty_joins && reds.size() > 0) structured -= 1;
    const bool reachable_agree = structured == BigCount(reachable.size());

    if (format == "csv") {
      out_ << "j,s,count,engine,oracle,recursive,agree\n";
      for (const Row& row : rows) {
        out_ << row.j << ',' << row.s << ',' << row.cell.primary.value << ','
             << to_string(row.cell.primary.engine) << ',';
        if (row.cell.oracle) out_ << row.cell.oracle->value;
        out_ << ',';
        if (row.cell.recursive) out_ << row.cell.recursive->value;
        out_ << ',' << (row.cell.agree ? "true" : "false") << "\n";
      }
    } else {
      Json cells = Json::array();
      for (const Row& row : rows) {
        Json c = Json::object();
        c["j"] = row.j;
        c["s"] = row.s;
        c["count"] = count_json(row.cell.primary.value);
        c["engine"] = to_string(row.cell.primary.engine);
        if (engine == "both") {
          c["oracle"] = count_json(row.cell.oracle->value);
          c["recursive"] = count_json(row.cell.recursive->value);
          c["recursive_engine"] = to_string(row.cell.recursive->engine);
        }
        c["agree"] = row.cell.agree;
        cells.push_back(std::move(c));
      }
      Json by_size = Json::array();
      for (const auto& v : joins_by_size) by_size.push_back(count_json(v));
      Json summary = Json::object();
      summary["all_agree"] = all_agree;
      summary["joins_by_size"] = std::move(by_size);
      summary["reachable"] = reachable.size();
      summary["structured"] = count_json(structured);
      summary["reachable_agree"] = reachable_agree;
      Json in = red_inputs(reds, engine);
      in["nonempty_joins"] = nonempty_joins;
      Json result = Json::object();
      result["cells"] = std::move(cells);
      result["summary"] = std::move(summary);
      Json provenance = Json::object();
      if (engine != "recursive") provenance["oracle"] = to_string(Engine::oracle);
      if (engine != "oracle") {
        bool fell_back = false;
        for (const Row& row : rows) fell_back = fell_back || row.cell.recursive->engine == Engine::fallback;
        provenance["recursive"] = to_string(fell_back ? Engine::fallback : Engine::recursive);
      }
      provenance["reachable"] = to_string(Engine::oracle);
      provenance["structured"] = to_string(Engine::closed_form);
      emit("red-table", std::move(in), std::move(result), std::move(provenance));
    }
    if (!all_agree) {
      err_ << "partlat: engines disagree on at least one cell\n";
      return exit_failure;
    }
    if (!reachable_agree) {
      err_ << "partlat: structured count " << structured << " differs from " << reachable.size()
           << " reachable partitions\n";
      return exit_failure;
    }
    return exit_ok;
  }

  int cmd_check(std::size_t n, const std::string& properties_text) {
    if (labels_.active() && labels_.size() != n) {
      throw detail::UsageError("n " + std::to_string(n) + " disagrees with --labels");
    }
    std::vector<std::string> requested;
    if (partlat::detail::trim(properties_text).empty()) {
      requested = property_names();
    } else {
      for (auto part : partlat::detail::split(properties_text, ',')) {
        requested.emplace_back(partlat::detail::trim(part));
      }
    }
    for (const auto& name : requested) {
      const auto canonical = canonical_property_name(name);
      const auto& names = property_names();
      if (std::find(names.begin(), names.end(), canonical) == names.end()) {
        throw detail::UsageError("unknown property '" + name + "'");
      }
    }
    Json reports = Json::array();
    std::uint64_t passed = 0, failed = 0, skipped = 0;
    for (const auto& name : requested) {
      const PropertyReport r = run_property(name, n, ceilings_, limits_);
      if (r.skipped) {
        ++skipped;
      } else if (r.passed()) {
        ++passed;
      } else {
        ++failed;
      }
      reports.push_back(detail::report_json(r, labels_));
    }
    Json in = inputs();
    in["n"] = n;
    Json props = Json::array();
    for (const auto& name : requested) props.push_back(canonical_property_name(name));
    in["properties"] = std::move(props);
    Json summary = Json::object();
    summary["passed"] = passed;
    summary["failed"] = failed;
    summary["skipped"] = skipped;
    Json result = Json::object();
    result["reports"] = std::move(reports);
    result["summary"] = std::move(summary);
    emit("check", std::move(in), std::move(result), {{"reports", to_string(Engine::oracle)}});
    return failed > 0 ? exit_failure : exit_ok;
  }

  std::string dot(const LabeledGraph& g, std::string_view name) const {
    if (!labels_.active()) return to_dot(g, name);
    std::string out = "graph " + std::string(name) + " {\n";
    for (Label v = 0; v < g.vertex_count(); ++v) {
      out += "  " + std::to_string(v) + " [label=" + Json(labels_.name(v)).dump() + "];\n";
    }
    for (const Edge& e : g.edges()) {
      out += "  " + std::to_string(e.a) + " -- " + std::to_string(e.b) + ";\n";
    }
    out += "}\n";
    return out;
  }

  int emit_dot(const std::string& text, const std::string& format, Json in) {
    if (format == "dot") {
      out_ << text;
    } else {
      emit("export-dot", std::move(in), {{"dot", text}}, Json::object());
    }
    return exit_ok;
  }

  int cmd_export_dot_partition(const std::string& text, const std::string& format) {
    const SetPartition p = labels_.parse_partition(text);
    Json in = inputs();
    in["partition"] = labels_.partition(p);
    in["n"] = p.ground_size();
    return emit_dot(dot(graph_of_partition(p), "G_pi"), format, std::move(in));
  }

  int cmd_export_dot_reds(std::size_t n, const std::string& text, const std::string& format) {
    const RedAtomSet reds = parse_reds(n, text);
    Json in = inputs();
    in["n"] = n;
    in["reds"] = labels_.atoms(reds.atoms());
    return emit_dot(dot(reds.graph(), "G_R"), format, std::move(in));
  }

  std::ostream& out_;
  std::ostream& err_;
  Engines engines_;
  EnvLookup env_;
  Limits limits_;
  SuiteCeilings ceilings_;
  Json overrides_ = Json::object();
  detail::Labels labels_;
};

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               Engines engines = default_engines(), EnvLookup env = process_env) {
  return App(out, err, std::move(engines), std::move(env)).run(args);
}

}  // namespace partlat::cli
