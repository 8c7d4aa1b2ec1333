// Batch command-line interface with deterministic JSON reports.
// Exit codes: 0 success, 1 property failure, 2 usage or parse error, 3 inconclusive.
#include <fstream>
#include <iostream>
#include <iterator>

#include "CLI11.hpp"
#include "maxcons/serialize.hpp"

using namespace maxcons;

namespace {

constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json parse_input(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError("malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Form parse_form(const std::string& s) {
  if (s == "spinor") return Form::Spinor;
  if (s == "tensor") return Form::Tensor;
  throw UsageError("form must be spinor or tensor");
}

void emit(const Json& report) { std::cout << report.dump(2) << "\n"; }

int error_report(const std::string& command, const std::string& kind, const std::string& message, int code) {
  emit({{"command", command}, {"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}});
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact conservation laws of the free Maxwell equations"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string form = "spinor", to;
  std::uint64_t seed = 0;
  int jobs = 1, max_weight = 2;
  app.add_option("--seed", seed, "Seed for every randomized check")->capture_default_str();
  app.add_option("--jobs", jobs, "Internal parallelism bound")->capture_default_str()->check(CLI::Range(1, 256));
  app.add_option("--max-weight", max_weight, "Largest supported current weight")
      ->capture_default_str()
      ->check(CLI::Range(0, 2));
  app.add_option("--form", form, "spinor or tensor")->capture_default_str();
  app.add_option("--to", to, "Target representation for convert");

  int r = 0, w = -1, n = 0;
  std::string file, kind;
  auto* dims = app.add_subcommand("dims", "Dimension formulas, enumeration counts, ranks and degree breakdowns");
  dims->add_option("r", r, "Block index")->required()->check(CLI::NonNegativeNumber);
  bool no_rank = false;
  dims->add_flag("--no-rank", no_rank, "Skip evaluation ranks");
  auto* basis = app.add_subcommand("basis", "Serialized basis currents of weight <= w");
  basis->add_option("w", w, "Weight bound (defaults to --max-weight)");
  auto* verify = app.add_subcommand("verify", "Conservation check of a serialized current");
  verify->add_option("file", file, "Current JSON, - for stdin")->required();
  auto* classify = app.add_subcommand("classify", "Decomposition of a serialized current");
  classify->add_option("file", file, "Current JSON, - for stdin")->required();
  auto* tensors = app.add_subcommand("tensors", "Conserved tensor and its identity report");
  tensors->add_option("kind", kind, "T, Z or V")->required();
  tensors->add_option("n", n, "Extension order")->required()->check(CLI::Range(0, 2));
  auto* convert = app.add_subcommand("convert", "Spinor/tensor conversion of a serialized current");
  convert->add_option("file", file, "Current JSON, - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::string command = app.get_subcommands().front()->get_name();
  std::string inputs = command + " seed=" + std::to_string(seed) + " max_weight=" + std::to_string(max_weight);
  try {
    if (dims->parsed()) {
      inputs += " r=" + std::to_string(r) + (no_rank ? " no_rank" : "");
      emit(make_report(command, inputs, to_json(dims_report(r, !no_rank, seed, jobs))));
      return kOk;
    }
    if (basis->parsed()) {
      if (w < 0) w = max_weight;
      if (w > max_weight) throw UsageError("weight above --max-weight");
      const Form f = parse_form(form);
      inputs += " w=" + std::to_string(w) + " form=" + form;
      Json list = Json::array();
      for (const auto& e : basis_enumerate(w, f, jobs)) {
        list.push_back({{"label", e.label.str()},
                        {"family", e.label.family_name()},
                        {"weight", e.label.weight()},
                        {"current", to_json(e.current)}});
      }
      emit(make_report(command, inputs, {{"count", list.size()}, {"currents", list}}));
      return kOk;
    }
    if (tensors->parsed()) {
      TensorKind k;
      try {
        k = parse_tensor_kind(kind);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (k == TensorKind::W) throw UsageError("tensors takes T, Z or V");
      inputs += " kind=" + kind + " n=" + std::to_string(n);
      const ConservedTensor t = conserved_tensor(k, n);
      Json props = Json::array();
      bool all = true;
      for (const auto& p : tensor_properties(t)) {
        props.push_back({{"name", p.name}, {"pass", p.pass}});
        all = all && p.pass;
      }
      emit(make_report(command, inputs, {{"tensor", to_json(t)}, {"properties", props}, {"all_pass", all}}));
      return all ? kOk : kPropertyFailure;
    }

    const std::string text = read_input(file);
    inputs += " input=" + fnv1a_hex(text);
    Current c;
    try {
      c = current_from_json(parse_input(text));
    } catch (const SchemaError& e) {
      throw UsageError(e.what());
    }
    if (verify->parsed()) {
      const bool ok = is_conserved(c);
      Json res = {{"conserved", ok}};
      if (!ok) res["divergence"] = divergence(c).str();
      emit(make_report(command, inputs, res));
      return ok ? kOk : kPropertyFailure;
    }
    if (convert->parsed()) {
      if (to != "spinor" && to != "tensor") throw UsageError("convert needs --to spinor|tensor");
      inputs += " to=" + to;
      const Current out = to == "spinor" ? (c.rep == Current::Rep::Spinor ? c : tensor_to_spinor(c))
                                         : (c.rep == Current::Rep::Tensor ? c : spinor_to_tensor(c));
      emit(make_report(command, inputs, {{"current", to_json(out)}}));
      return kOk;
    }
    // classify
    if (!is_conserved(c)) {
      emit(make_report(command, inputs, {{"conserved", false}, {"divergence", divergence(c).str()}}));
      return kPropertyFailure;
    }
    const Decomposition d = classify_current(c);
    for (const auto& [lab, coeff] : d.terms) {
      if (lab.weight() > max_weight) throw InconclusiveError("decomposition uses labels above --max-weight");
    }
    emit(make_report(command, inputs, to_json(d)));
    return kOk;
  } catch (const UsageError& e) {
    return error_report(command, "usage", e.what(), kUsage);
  } catch (const InconclusiveError& e) {
    return error_report(command, "inconclusive", e.what(), kInconclusive);
  } catch (const ClassificationError& e) {
    return error_report(command, "classification", e.what(), kPropertyFailure);
  } catch (const std::invalid_argument& e) {
    return error_report(command, "usage", e.what(), kUsage);
  }
}
