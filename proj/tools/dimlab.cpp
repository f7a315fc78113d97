#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "dimlab/verify.hpp"

using namespace dimlab;

namespace {

void write_report_file(const std::string& path,
                       const std::vector<CheckReport>& reports) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error("cannot write report file " + path);
  out << reports_to_json(reports) << "\n";
}

void print_report(const CheckReport& r) {
  std::cout << r.check << ": " << to_string(r.status);
  if (!r.lhs_invariants.empty() || !r.rhs_invariants.empty())
    std::cout << "  lhs=[" << r.lhs_invariants << "] rhs=[" << r.rhs_invariants
              << "]";
  std::cout << "  (" << r.millis << " ms)\n";
  for (const auto& w : r.witnesses) std::cout << "  - " << w << "\n";
}

FoxWitness parse_witness(const std::string& text, int rank) {
  // five semicolon-separated fields: x; y; m; s_x; s_y
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) parts.push_back(item);
  if (parts.size() != 5) throw Error("witness needs fields x;y;m;s_x;s_y");
  FoxWitness w;
  w.x = parse_word(parts[0], rank);
  w.y = parse_word(parts[1], rank);
  w.m = std::stol(parts[2]);
  w.s_x = parse_word(parts[3], rank);
  w.s_y = parse_word(parts[4], rank);
  return w;
}

std::map<std::string, std::string> pres_params(const PresentationSpec& p) {
  std::map<std::string, std::string> m;
  m["rank"] = std::to_string(p.rank);
  std::string rel;
  for (size_t i = 0; i < p.relators.size(); ++i)
    rel += (i ? ";" : "") + word_str(p.relators[i]);
  m["relators"] = rel;
  if (p.include_gamma2) m["include_gamma2"] = "1";
  m["name"] = p.name;
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimension-lab: exact checks for dimension and Fox subgroups"};
  app.require_subcommand(1);

  std::string report_path;

  auto* check = app.add_subcommand("check", "run one named check");
  std::string check_id, pres_path, table_path, exponents, relators, witness_arg;
  int rank = 0;
  bool inc_g2 = false;
  std::vector<std::string> witness_texts;
  check->add_option("id", check_id,
                    "fg1|l2|corfrf|frcapf3|eqr|kkv|d3fr|d3r2|fox_gen_b|"
                    "fox_iso_a|fox_remark_tf|thdim|foxlimit")
      ->required();
  check->add_option("--pres", pres_path, "presentation file");
  check->add_option("--table", table_path, "finite group multiplication table");
  check->add_option("--rank", rank, "free group rank (fg1/l2)");
  check->add_option("--exponents", exponents, "comma list, e.g. 4,2");
  check->add_option("--relators", relators, "semicolon-separated relators");
  check->add_flag("--include-gamma2", inc_g2, "add weight-2 commutator relators");
  check->add_option("--witness", witness_texts,
                    "fox_gen_b witness 'x;y;m;s_x;s_y' (repeatable)");
  check->add_option("--report", report_path, "write a JSON report");

  auto* suite = app.add_subcommand("suite", "run a check suite");
  std::string preset = "smoke";
  suite->add_option("--preset", preset, "smoke|full");
  suite->add_option("--report", report_path, "write a JSON report");

  auto* functor = app.add_subcommand("functor", "evaluate a quadratic functor");
  std::string ftag, group_list;
  functor->add_option("tag", ftag,
                      "tensor2|sp2|lambda2|tilde2|l1tensor2|l1sp2|l1lambda2|"
                      "l1tilde2")
      ->required();
  functor->add_option("--group", group_list, "invariant factors, e.g. 2,4,0")
      ->required();

  auto* limit = app.add_subcommand("limit", "limit over free presentations");
  std::string rep_tag;
  limit->add_option("--rep", rep_tag, "representation tag")->required();
  limit->add_option("--pres", pres_path, "presentation file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      std::map<std::string, std::string> params;
      PresentationSpec pres;
      bool have_pres = false;
      if (!pres_path.empty()) {
        pres = PresentationSpec::from_file(pres_path);
        have_pres = true;
      } else if (!relators.empty() || rank > 0) {
        pres.rank = rank;
        pres.include_gamma2 = inc_g2;
        pres.name = "cli";
        std::istringstream in(relators);
        std::string item;
        while (std::getline(in, item, ';'))
          if (!item.empty()) pres.relators.push_back(parse_word(item, rank));
        have_pres = true;
      }
      CheckReport r;
      if (check_id == "fg1" || check_id == "l2") {
        r = check_dim_identity(
            check_id,
            {{"rank", std::to_string(rank)}, {"exponents", exponents}});
      } else if (check_id == "fox_gen_b" || check_id == "fox_iso_a" ||
                 check_id == "fox_remark_tf") {
        if (!have_pres) throw Error(check_id + " needs --pres or --relators");
        std::vector<FoxWitness> ws;
        for (const auto& t : witness_texts)
          ws.push_back(parse_witness(t, pres.rank));
        FoxPart part = check_id == "fox_gen_b"
                           ? FoxPart::GEN_B
                           : (check_id == "fox_iso_a" ? FoxPart::ISO_A
                                                      : FoxPart::REMARK_TF);
        r = check_fox(part, pres, ws);
      } else if (check_id == "thdim") {
        if (!have_pres || table_path.empty())
          throw Error("thdim needs --pres and --table");
        r = check_thdim(pres, FiniteGroupTable::from_file(table_path));
      } else if (check_id == "foxlimit") {
        if (!have_pres) throw Error("foxlimit needs --pres or --relators");
        r = check_foxlimit(pres);
      } else {
        if (!have_pres) throw Error(check_id + " needs --pres or --relators");
        r = check_dim_identity(check_id, pres_params(pres));
      }
      print_report(r);
      write_report_file(report_path, {r});
      return r.status == CheckStatus::FAILED ? 1 : 0;
    }
    if (*suite) {
      SuiteResult res = run_suite(SuiteConfig{preset});
      if (res.exit_code == 2) {
        std::cerr << "unknown preset: " << preset << "\n";
        return 2;
      }
      for (const auto& r : res.reports) print_report(r);
      write_report_file(report_path, res.reports);
      std::cout << (res.exit_code == 0 ? "all checks passed" : "FAILURES")
                << "\n";
      return res.exit_code;
    }
    if (*functor) {
      std::vector<Int> inv;
      if (!group_list.empty()) {
        std::istringstream in(group_list);
        std::string item;
        while (std::getline(in, item, ',')) inv.push_back(Int(item));
      }
      FgAbelian a = FgAbelian::from_invariants(inv);
      FgAbelian value;
      if (ftag.rfind("l1", 0) == 0) {
        QuadTag q = quad_tag_from_string(ftag.substr(2));
        DerivedResult dk = derived_l1(q, a);
        value = dk.value;
        if (q == QuadTag::SP2) {
          DerivedResult closed = l1sp2_closed(a);
          if (!ab_iso(closed.value, dk.value))
            throw Error("closed form and simplicial path disagree");
        }
      } else {
        value = quad_apply(quad_tag_from_string(ftag), a);
      }
      std::cout << invariants_str(value.invariant_factors()) << "\n";
      return 0;
    }
    if (*limit) {
      PresentationSpec pres = PresentationSpec::from_file(pres_path);
      FgAbelian lim = limit_equalizer(rep_tag_from_string(rep_tag), pres);
      std::cout << invariants_str(lim.invariant_factors()) << "\n";
      return 0;
    }
  } catch (const PreconditionViolated& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const ResourceBound& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
