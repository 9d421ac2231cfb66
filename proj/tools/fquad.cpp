// Command-line surface: classify quadratic spaces, tabulate functor
// dimensions, run the verification suite, and export spaces as JSON.
// Exit codes: 0 success, 1 check failure, 2 usage or parse error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fquad/verify.hpp"

namespace {

using namespace fquad;

std::string normal_form_name(const NormalForm& nf) {
  if (nf.space.dim() == 0) return "0";
  std::string out;
  for (std::size_t i = 0; i < nf.h0_copies; ++i) out += (out.empty() ? "" : "+") + std::string("H0");
  if (nf.arf) out += (out.empty() ? "" : "+") + std::string("H1");
  return out;
}

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw std::invalid_argument("cannot open output file " + out_path);
  os << text;
}

int cmd_classify(const std::vector<std::string>& exprs, const std::string& format,
                 const std::string& out_path) {
  nlohmann::ordered_json jall = nlohmann::ordered_json::array();
  std::string text;
  for (const auto& expr : exprs) {
    QuadSpace s = parse_space(expr);
    nlohmann::ordered_json j;
    j["space"] = expr;
    j["dim"] = s.dim();
    std::size_t rad = radical(s).dim();
    j["radical_dim"] = rad;
    j["nondegenerate"] = rad == 0;
    std::string line = expr + ": dim " + std::to_string(s.dim());
    if (rad == 0 && s.dim() > 0) {
      NormalForm nf = classify(s);
      j["arf"] = nf.arf ? 1 : 0;
      j["normal_form"] = normal_form_name(nf);
      line += ", nondegenerate, Arf " + std::to_string(nf.arf ? 1 : 0) + ", = " +
              normal_form_name(nf);
    } else if (s.dim() == 0) {
      line += ", the zero space";
    } else {
      j["arf"] = nullptr;
      line += ", radical dim " + std::to_string(rad) + ", degenerate";
    }
    text += line + "\n";
    jall.push_back(j);
  }
  write_or_print(format == "json" ? jall.dump(2) + "\n" : text, out_path);
  return 0;
}

int cmd_table(const std::vector<std::string>& args, const std::string& format,
              const std::string& out_path) {
  std::vector<std::string> functor_names, space_names;
  for (const auto& a : args) {
    bool is_json_space = !a.empty() && a[0] == '{';
    if (!is_json_space && (a == "pf" || a.find(':') != std::string::npos))
      functor_names.push_back(a);
    else
      space_names.push_back(a);
  }
  if (functor_names.empty()) throw std::invalid_argument("table: no functors given");
  if (space_names.empty()) throw std::invalid_argument("table: no spaces given");
  std::vector<FunctorPtr> functors;
  for (const auto& f : functor_names) functors.push_back(parse_functor(f));
  std::vector<QuadSpace> spaces;
  for (const auto& s : space_names) spaces.push_back(parse_space(s));

  std::vector<std::vector<std::size_t>> dims(functors.size());
  for (std::size_t i = 0; i < functors.size(); ++i)
    for (const auto& s : spaces) dims[i].push_back(functors[i]->value(s).dim);

  if (format == "json") {
    nlohmann::ordered_json j;
    j["functors"] = functor_names;
    j["spaces"] = space_names;
    j["dims"] = dims;
    write_or_print(j.dump(2) + "\n", out_path);
    return 0;
  }
  if (format == "csv") {
    std::string text = "functor,space,dim\n";
    for (std::size_t i = 0; i < functors.size(); ++i)
      for (std::size_t k = 0; k < spaces.size(); ++k)
        text += functor_names[i] + "," + space_names[k] + "," + std::to_string(dims[i][k]) + "\n";
    write_or_print(text, out_path);
    return 0;
  }
  std::size_t name_w = 8;
  for (const auto& f : functor_names) name_w = std::max(name_w, f.size());
  std::string text(name_w, ' ');
  for (const auto& s : space_names) text += "\t" + s;
  text += "\n";
  for (std::size_t i = 0; i < functors.size(); ++i) {
    std::string line = functor_names[i];
    line.resize(name_w, ' ');
    for (std::size_t k = 0; k < spaces.size(); ++k) line += "\t" + std::to_string(dims[i][k]);
    text += line + "\n";
  }
  write_or_print(text, out_path);
  return 0;
}

int cmd_verify(std::vector<std::string> checks, const VerifyOptions& options,
               const std::string& format, const std::string& out_prefix) {
  if (checks.empty() || (checks.size() == 1 && checks[0] == "all")) checks = all_check_names();
  auto known = all_check_names();
  for (const auto& c : checks)
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      std::string names = "all";
      for (const auto& k : known) names += ", " + k;
      throw std::invalid_argument("unknown check '" + c + "'; known checks: " + names);
    }

  std::vector<CheckReport> reports = run_checks(checks, options);
  bool all_passed = true;
  nlohmann::ordered_json jarr = nlohmann::ordered_json::array();
  std::string csv = "check,object,quantity,value,ok\n";
  for (const auto& rep : reports) {
    all_passed = all_passed && rep.passed;
    std::cout << (rep.passed ? "PASS " : "FAIL ") << rep.check_name << " (" << rep.rows.size()
              << " rows, " << rep.runtime_ms << " ms)"
              << (rep.label.empty() ? "" : " [" + rep.label + "]") << "\n";
    jarr.push_back(rep.to_json());
    std::ostringstream os;
    rep.write_csv(os);
    csv += os.str();
  }
  nlohmann::ordered_json jtop;
  jtop["passed"] = all_passed;
  jtop["seed"] = options.seed;
  jtop["reports"] = jarr;

  if (!out_prefix.empty()) {
    std::ofstream js(out_prefix + ".json");
    if (!js) throw std::invalid_argument("cannot open " + out_prefix + ".json");
    js << jtop.dump(2) << "\n";
    std::ofstream cs(out_prefix + ".csv");
    if (!cs) throw std::invalid_argument("cannot open " + out_prefix + ".csv");
    cs << csv;
  }
  if (format == "json") std::cout << jtop.dump(2) << "\n";
  if (format == "csv") std::cout << csv;
  return all_passed ? 0 : 1;
}

int cmd_export(const std::vector<std::string>& exprs, const std::string& out_path) {
  nlohmann::ordered_json jarr = nlohmann::ordered_json::array();
  for (const auto& expr : exprs) {
    nlohmann::ordered_json j = space_to_json(parse_space(expr));
    j["name"] = expr;
    jarr.push_back(j);
  }
  write_or_print(jarr.dump(2) + "\n", out_path);
  return 0;
}

std::vector<std::string> split_roster(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::size_t pos = 0;
    while (pos <= item.size()) {
      std::size_t next = item.find(',', pos);
      std::string tok =
          item.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (tok == "default") {
        auto d = default_roster_names();
        out.insert(out.end(), d.begin(), d.end());
      } else if (!tok.empty()) {
        out.push_back(tok);
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"functor computations over F2 quadratic spaces"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string out_path;

  auto* classify_cmd = app.add_subcommand("classify", "classify quadratic spaces");
  std::vector<std::string> classify_spaces;
  classify_cmd
      ->add_option("spaces", classify_spaces,
                   "space expressions (H0, H1, x0, x1 joined by +, or JSON)")
      ->required();
  classify_cmd->add_option("--format", format, "text|json");
  classify_cmd->add_option("--out", out_path, "output file");

  auto* table_cmd = app.add_subcommand("table", "dimension table: functors x spaces");
  std::vector<std::string> table_args;
  table_cmd->add_option("args", table_args, "functor names and space expressions")->required();
  table_cmd->add_option("--format", format, "text|json|csv");
  table_cmd->add_option("--out", out_path, "output file");

  auto* verify_cmd = app.add_subcommand("verify", "run verification checks");
  std::vector<std::string> checks;
  std::vector<std::string> roster_raw;
  std::string alpha = "both";
  VerifyOptions options;
  verify_cmd->add_option("checks", checks, "check names or 'all'");
  verify_cmd->add_option("--roster", roster_raw, "space expressions or 'default'");
  verify_cmd->add_option("--alpha", alpha, "0|1|both");
  verify_cmd->add_option("--nmax", options.nmax, "largest exterior degree");
  verify_cmd->add_option("--dmax", options.dmax, "largest filtration stage");
  verify_cmd->add_option("--seed", options.seed, "sampling seed");
  verify_cmd->add_option("--samples", options.samples, "seeded sample count");
  verify_cmd->add_option("--format", format, "text|json|csv (stdout)");
  std::string out_prefix = "fquad_report";
  verify_cmd->add_option("--out", out_prefix, "report file prefix (.json/.csv)");

  auto* export_cmd = app.add_subcommand("export", "export spaces in the JSON space format");
  std::vector<std::string> export_spaces;
  export_cmd->add_option("spaces", export_spaces, "space expressions")->required();
  export_cmd->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (classify_cmd->parsed()) return cmd_classify(classify_spaces, format, out_path);
    if (table_cmd->parsed()) return cmd_table(table_args, format, out_path);
    if (verify_cmd->parsed()) {
      if (alpha == "0")
        options.alpha = 0;
      else if (alpha == "1")
        options.alpha = 1;
      else if (alpha == "both")
        options.alpha = -1;
      else
        throw std::invalid_argument("--alpha must be 0, 1 or both");
      options.roster = split_roster(roster_raw);
      return cmd_verify(checks, options, format, out_prefix);
    }
    if (export_cmd->parsed()) return cmd_export(export_spaces, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
