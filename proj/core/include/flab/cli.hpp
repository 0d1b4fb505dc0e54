#pragma once
//
// Spec-file driver: JSON (with comments) describing named objects and an
// ordered task list; produces a deterministic JSON report plus CSV dumps.
//
// Report layout:
//   { "metadata": { "generated_at": ... },      excluded from determinism
//     "report": { "tool_version", "spec_digest", "seed", "results", "warnings" } }
//

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flab/forms.hpp"

namespace flab::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSpecVersion = 1;

class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact serialization. Polys are arrays of {"exponents", "re", "im"} with
// rational strings; forms are {"n", "degree", "terms": [{"basis", "coeff"}]}.
json poly_to_json(const Poly& p);
// Accepts the array form, an expression string, or a number.
Poly poly_from_json(const json& j, std::size_t n, bool with_conjugates);
json form_to_json(const PolyForm& u);
// Accepts the terms form or, for 1-forms, {"dz": [...], "dzbar": [...]}.
PolyForm form_from_json(const json& j, std::size_t n);

// Numbers: integers and decimals are read exactly ("0.1" is 1/10); strings
// "p/q" or decimals; complex values as [re, im] or {"re", "im"}.
mpq_class rational_from_json(const json& j);
RationalComplex complex_from_json(const json& j);

// Doubles are encoded as numbers, or as "inf" / "-inf" / "nan" strings.
json number(double x);
json complex_to_json(cplx z);
json vector_to_json(const std::vector<cplx>& v);

// Sorted keys, two-space indent, 17 significant digits for doubles.
std::string emit_json(const json& j);
// One line per task result.
std::string emit_text(const json& report);

std::string sha256_hex(const std::string& bytes);

struct TaskContext {
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
    std::vector<std::string> written_files;
};

struct PlannedTask {
    std::string kind;
    std::string object;
    json parameters;
    bool has_seed_override = false;
    std::uint64_t seed_override = 0;
    std::function<json(TaskContext&)> run;
};

struct LoadedSpec {
    std::string digest;
    json objects;  // definitions as written
    std::vector<PlannedTask> tasks;
    std::vector<std::string> warnings;
};

// Throws SpecError; parse errors name the line and column.
LoadedSpec load_spec_text(const std::string& text);
LoadedSpec load_spec_file(const std::filesystem::path& path);

struct RunResult {
    json document;  // {"metadata", "report"}
    int exit_code = 0;
};

// Runs every task in order; task exceptions are recorded and give exit code 2.
RunResult run_spec(const LoadedSpec& spec, std::uint64_t seed, const std::filesystem::path& out_dir);

// Entry points used by the executable; return the process exit code.
int command_run(const std::filesystem::path& spec_path, std::uint64_t seed, const std::filesystem::path& out_dir,
                const std::string& format, std::ostream& out, std::ostream& err);
int command_validate(const std::filesystem::path& spec_path, std::ostream& out, std::ostream& err);

}  // namespace flab::cli
