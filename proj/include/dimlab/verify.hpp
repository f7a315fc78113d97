#pragma once

#include <memory>

#include "dimlab/functors.hpp"
#include "dimlab/ideals.hpp"
#include "dimlab/report.hpp"

namespace dimlab {

// One object of the category of free presentations: F -> G with kernel the
// normal closure of the relators.
struct PresentationSpec {
  std::string name;
  int rank = 0;
  std::vector<FreeWord> relators;
  bool include_gamma2 = false;

  // relators plus, when include_gamma2 is set, the weight-2 basic commutators
  std::vector<FreeWord> relator_words() const;
  FgAbelian abelianization() const;
  // line format: rank N / relator <word> / include-gamma2 / name <id>
  static PresentationSpec parse(const std::string& text);
  static PresentationSpec from_file(const std::string& path);
};

// self-coproduct F*F ->> G with doubled letters and diagonal relators
PresentationSpec coproduct_with_self(const PresentationSpec& p);

enum class RepTag {
  GAMMA2_MOD3,    // gamma_2(F) / gamma_2(R) gamma_3(F)
  GAMMA2_MOD4,    // gamma_2(F) / gamma_2(R) gamma_4(F)
  RCAP2_MOD4,     // (R meet gamma_2 F) / gamma_2(R)(R meet gamma_4 F)
  K_FUNCTOR,      // (R meet gamma_2 F) / gamma_2(R)(R meet gamma_3 F)
  L1SP2_OF_K,
  F2_OVER_FR_F4,  // f^2 / (f r + f^4)
};
RepTag rep_tag_from_string(const std::string& s);
std::string to_string(RepTag tag);

struct FiniteGroupTable {
  int order = 0;
  std::vector<int> mul;  // row-major, 0-based element indices
  int identity = 0;

  int at(int a, int b) const { return mul[size_t(a) * size_t(order) + size_t(b)]; }
  void validate() const;  // throws NotAGroup
  bool is_abelian() const;
  std::vector<Int> abelian_invariants() const;
  // first line: order; then order rows of 1-based indices
  static FiniteGroupTable parse(const std::string& text);
  static FiniteGroupTable from_file(const std::string& path);
  static FiniteGroupTable cyclic_product(const std::vector<int>& orders);
  static FiniteGroupTable dihedral8();
  static FiniteGroupTable quaternion8();
};

// lim Phi computed as ker(Phi(i1) - Phi(i2)) over the self-coproduct
FgAbelian limit_equalizer(RepTag tag, const PresentationSpec& pres);
CheckReport monoadd_check(RepTag tag, const PresentationSpec& pres);
// invariant factors of D_n(G)/gamma_n(G) from the multiplication table
std::vector<Int> dim_quotient_finite(const FiniteGroupTable& g, int n);

// ids: fg1, corfrf, l2, frcapf3, eqr, kkv, d3fr, d3r2
CheckReport check_dim_identity(const std::string& id,
                               const std::map<std::string, std::string>& params);

enum class FoxPart { GEN_B, ISO_A, REMARK_TF };
struct FoxWitness {
  FreeWord x, y;
  long m = 1;
  FreeWord s_x, s_y;  // x^m = r_x s_x with r_x derived as x^m s_x^-1
};
CheckReport check_fox(FoxPart part, const PresentationSpec& pres,
                      const std::vector<FoxWitness>& witnesses = {});

CheckReport check_thdim(const PresentationSpec& pres,
                        const FiniteGroupTable& table);
CheckReport check_foxlimit(const PresentationSpec& pres);

struct SuiteConfig {
  std::string preset = "smoke";  // smoke | full
};
struct SuiteResult {
  std::vector<CheckReport> reports;
  int exit_code = 0;  // 0 ok, 1 failed checks, 2 usage/resource
};
SuiteResult run_suite(const SuiteConfig& config);
std::string reports_to_json(const std::vector<CheckReport>& reports);

}  // namespace dimlab
