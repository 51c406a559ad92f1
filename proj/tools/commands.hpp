#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace precess::cli {

enum ExitCode : int { ok = 0, usage_error = 1, blow_up = 2, invariant_failure = 3 };

int cmd_basis(const std::string& config, const std::string& export_path, std::ostream& out);
int cmd_eig(const std::string& config, std::ostream& out);
int cmd_steady(const std::string& config, std::ostream& out);
int cmd_run(const std::string& config, const std::string& output_override, std::ostream& out);

struct VerifyOptions {
  std::vector<int> degrees{1, 2, 4};
  std::string basis_file;       // also check this exported basis symbolically
  bool perturb_advection = false;  // negative control: +1e-6 on one T entry
};
int cmd_verify(const VerifyOptions& opt, std::ostream& out);

}  // namespace precess::cli
