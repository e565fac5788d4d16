// Command-line front end: bounds, structure classification, code
// construction and verification, the brute-force oracle, family sweeps,
// and decoding-chain traces.  Exit 0 on success, 1 when a verification
// fails, 2 on usage or input errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pic/achievability.hpp"
#include "pic/bounds.hpp"
#include "pic/chain_engine.hpp"
#include "pic/instance.hpp"
#include "pic/oracle.hpp"

namespace {

int env_max_m() {
  if (const char* s = std::getenv("PIC_MAX_M")) return std::atoi(s);
  return 0;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write file: " + out_path);
  out << text << '\n';
}

int parse_q(const std::string& s) {
  if (s == "auto") return 0;
  try {
    return std::stoi(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("--q must be an integer or \"auto\"");
  }
}

std::string trace_to_json(const pic::ChainTrace& trace) {
  nlohmann::json j;
  j["order"] = trace.order;
  j["skipped"] = pic::mask_messages(trace.skipped);
  j["hits"] = nlohmann::json::array();
  for (pic::Mask h : trace.hits) j["hits"].push_back(pic::mask_messages(h));
  j["steps"] = nlohmann::json::array();
  for (const pic::ChainStep& s : trace.steps) {
    nlohmann::json step;
    switch (s.kind) {
      case pic::ChainStep::decode: step["kind"] = "decode"; break;
      case pic::ChainStep::skip: step["kind"] = "skip"; break;
      case pic::ChainStep::avoid: step["kind"] = "avoid"; break;
    }
    step["message"] = s.message;
    step["via"] = pic::mask_messages(s.via);
    j["steps"].push_back(std::move(step));
  }
  return j.dump();
}

// The construction matching the classified structure, or the generic
// length-(m-1) fallback.  q = 0 means each constructor's default field.
pic::LinearCode build_construction(const pic::PliableInstance& inst,
                                   const pic::StructureClass& sc, int q) {
  using pic::StructureTag;
  const int q2 = q == 0 ? 2 : q;
  switch (sc.tag) {
    case StructureTag::perfect_nested:
      return pic::cyclic_partition_code(*sc.partition, q2);
    case StructureTag::truncated_nested:
      return pic::truncated_code(*sc.partition, sc.T, q);
    case StructureTag::slightly_imperfect:
      return pic::imperfect_patch_code(*sc.partition, sc.Q, q2);
    case StructureTag::prop1_triple: {
      const pic::Mask h2 = sc.triple[1], h3 = sc.triple[2];
      pic::Partition p = pic::Partition::make(inst.m, h2 & h3,
                                              {h2 & ~h3, h3 & ~h2});
      return pic::imperfect_patch_code(p, {}, q2);
    }
    case StructureTag::none:
      break;
  }
  if (inst.absent.empty()) {
    pic::LinearCode code;
    code.q = q2;
    code.m = inst.m;
    for (int i = 1; i <= inst.m; ++i) {
      pic::GfRow r(static_cast<std::size_t>(inst.m), 0);
      r[static_cast<std::size_t>(i - 1)] = 1;
      code.rows.push_back(std::move(r));
    }
    return code;
  }
  // Uncoded rows for one absent receiver, consecutive sums on the rest.
  const pic::Mask h = inst.absent.front();
  pic::LinearCode code;
  code.q = q2;
  code.m = inst.m;
  for (int msg : pic::mask_messages(h)) {
    pic::GfRow r(static_cast<std::size_t>(inst.m), 0);
    r[static_cast<std::size_t>(msg - 1)] = 1;
    code.rows.push_back(std::move(r));
  }
  const auto rest = pic::mask_messages(inst.full() & ~h);
  for (std::size_t j = 0; j + 1 < rest.size(); ++j) {
    pic::GfRow r(static_cast<std::size_t>(inst.m), 0);
    r[static_cast<std::size_t>(rest[j] - 1)] = 1;
    r[static_cast<std::size_t>(rest[j + 1] - 1)] = 1;
    code.rows.push_back(std::move(r));
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pliable index coding bounds, constructions, and oracles"};
  app.require_subcommand(1);

  std::string in_path, code_path, out_path, emit_trace_path;
  std::string q_str = "auto";
  std::string policy = "lookahead";
  std::string format = "csv";
  int l_max = -1;
  int sweep_m = 4, sweep_max_absent = 4, sweep_q = 2;

  auto* cmd_bound = app.add_subcommand("bound", "lower bounds and closed form");
  cmd_bound->add_option("--in", in_path, "instance JSON")->required();
  cmd_bound->add_option("--out", out_path, "report path (default stdout)");

  auto* cmd_classify = app.add_subcommand("classify", "structure class only");
  cmd_classify->add_option("--in", in_path, "instance JSON")->required();
  cmd_classify->add_option("--out", out_path, "report path (default stdout)");

  auto* cmd_construct =
      app.add_subcommand("construct", "achievability code for the structure");
  cmd_construct->add_option("--in", in_path, "instance JSON")->required();
  cmd_construct->add_option("--q", q_str, "field size or auto");
  cmd_construct->add_option("--out", out_path, "code path (default stdout)");

  auto* cmd_verify = app.add_subcommand("verify", "check a code decodes");
  cmd_verify->add_option("--in", in_path, "instance JSON")->required();
  cmd_verify->add_option("--code", code_path, "code JSON")->required();
  cmd_verify->add_option("--out", out_path, "decoding map path");

  auto* cmd_oracle =
      app.add_subcommand("oracle", "exhaustive minimum code length");
  cmd_oracle->add_option("--in", in_path, "instance JSON")->required();
  cmd_oracle->add_option("--q", q_str, "field size (default 2)");
  cmd_oracle->add_option("--l-max", l_max, "search ceiling (default m)");
  cmd_oracle->add_option("--out", out_path, "result path (default stdout)");

  auto* cmd_sweep =
      app.add_subcommand("sweep", "all canonical families vs the oracle");
  cmd_sweep->add_option("--m", sweep_m, "message count")->required();
  cmd_sweep->add_option("--max-absent", sweep_max_absent, "family size cap");
  cmd_sweep->add_option("--q", sweep_q, "starting field size");
  cmd_sweep->add_option("--out", out_path, "output path")->required();
  cmd_sweep->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* cmd_trace = app.add_subcommand("trace", "run one decoding chain");
  cmd_trace->add_option("--in", in_path, "instance JSON")->required();
  cmd_trace->add_option("--policy", policy, "option1 or lookahead")
      ->check(CLI::IsMember({"option1", "lookahead"}));
  cmd_trace->add_option("--emit-trace", emit_trace_path,
                        "trace path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const int max_m = env_max_m();
  try {
    if (cmd_bound->parsed()) {
      const auto inst = pic::parse_instance(slurp(in_path));
      emit(pic::report_to_json(pic::analyze(inst, false, max_m)), out_path);
    } else if (cmd_classify->parsed()) {
      const auto inst = pic::parse_instance(slurp(in_path));
      emit(pic::structure_to_json(pic::classify_structure(inst)), out_path);
    } else if (cmd_construct->parsed()) {
      const auto inst = pic::parse_instance(slurp(in_path));
      const auto sc = pic::classify_structure(inst);
      const auto code = build_construction(inst, sc, parse_q(q_str));
      if (!pic::verify_code(inst, code)) {
        std::cerr << "constructed code failed verification\n";
        return 1;
      }
      emit(pic::code_to_json(code), out_path);
    } else if (cmd_verify->parsed()) {
      const auto inst = pic::parse_instance(slurp(in_path));
      const auto code = pic::parse_code(slurp(code_path), inst.m);
      const auto d = pic::verify_code(inst, code);
      if (!d) {
        std::cerr << "verification failed: some present receiver cannot "
                     "decode a new message\n";
        return 1;
      }
      nlohmann::json j = nlohmann::json::array();
      for (const auto& [h, msg] : *d) {
        nlohmann::json entry;
        entry["receiver"] = pic::mask_messages(h);
        entry["decodes"] = msg;
        j.push_back(std::move(entry));
      }
      emit(j.dump(), out_path);
    } else if (cmd_oracle->parsed()) {
      const auto inst = pic::parse_instance(slurp(in_path));
      const int q = q_str == "auto" ? 2 : parse_q(q_str);
      const int ceiling = l_max < 0 ? inst.m : l_max;
      const auto len = pic::min_linear_length(inst, q, ceiling, max_m);
      nlohmann::json j;
      j["q"] = q;
      j["l_max"] = ceiling;
      j["oracle_len"] = len ? nlohmann::json(*len) : nullptr;
      emit(j.dump(), out_path);
    } else if (cmd_sweep->parsed()) {
      const auto records = pic::sweep(sweep_m, sweep_max_absent, sweep_q);
      emit(format == "csv" ? pic::sweep_to_csv(records)
                           : pic::sweep_to_json(records),
           out_path);
    } else if (cmd_trace->parsed()) {
      const auto inst = pic::parse_instance(slurp(in_path));
      const auto d = pic::total_min_choice(inst);
      const auto pol = policy == "option1" ? pic::skip_smallest_policy()
                                           : pic::look_ahead_policy();
      emit(trace_to_json(pic::run_chain(inst, d, pol)), emit_trace_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
