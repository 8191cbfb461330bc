#include "hypertree/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hypertree/errors.hpp"

namespace hypertree {

namespace {

constexpr std::uint64_t kMaxTableCells = std::uint64_t{1} << 26;

std::size_t table_size(const std::vector<int>& arities) {
    std::uint64_t cells = 1;
    for (int a : arities) {
        cells *= static_cast<std::uint64_t>(a);
        if (cells > kMaxTableCells) throw GuardError("marginal table exceeds 2^26 cells");
    }
    return static_cast<std::size_t>(cells);
}

std::vector<int> scope_arities(const MarginalSource& src, VertexSet scope) {
    std::vector<int> out;
    for (int v : scope.members()) out.push_back(src.arity(v));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

}  // namespace

// ---------------------------------------------------------------------------
// MarginalTable

MarginalTable::MarginalTable(VertexSet scope, std::vector<int> arities, std::vector<double> probs)
    : scope_(scope), arities_(std::move(arities)), probs_(std::move(probs)) {
    if (static_cast<int>(arities_.size()) != scope_.size())
        throw ValidationError("marginal arity list does not match scope " + scope_.to_string());
    if (probs_.size() != table_size(arities_))
        throw ValidationError("marginal table size does not match arities");
}

std::size_t MarginalTable::index_of(std::span<const int> local) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < arities_.size(); ++i) idx = idx * arities_[i] + local[i];
    return idx;
}

MarginalTable MarginalTable::sum_out(int v) const {
    if (!scope_.contains(v)) throw ValidationError("sum_out: vertex not in scope");
    const auto members = scope_.members();
    const std::size_t pos = static_cast<std::size_t>(
        std::find(members.begin(), members.end(), v) - members.begin());

    std::vector<int> out_arities;
    for (std::size_t i = 0; i < arities_.size(); ++i)
        if (i != pos) out_arities.push_back(arities_[i]);

    std::size_t inner = 1;
    for (std::size_t i = pos + 1; i < arities_.size(); ++i) inner *= arities_[i];
    const std::size_t a = arities_[pos];
    const std::size_t outer = probs_.size() / (inner * a);

    std::vector<double> out(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t x = 0; x < a; ++x)
            for (std::size_t i = 0; i < inner; ++i)
                out[o * inner + i] += probs_[(o * a + x) * inner + i];
    return MarginalTable(scope_.without(v), std::move(out_arities), std::move(out));
}

double entropy(const MarginalTable& m) {
    double h = 0.0;
    for (double p : m.probs())
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

// ---------------------------------------------------------------------------
// MarginalSource

std::vector<int> MarginalSource::arities() const {
    std::vector<int> out(num_vars());
    for (int v = 0; v < num_vars(); ++v) out[v] = arity(v);
    return out;
}

std::uint64_t MarginalSource::joint_space_size() const {
    std::uint64_t cells = 1;
    for (int v = 0; v < num_vars(); ++v) {
        const auto a = static_cast<std::uint64_t>(arity(v));
        if (cells > std::numeric_limits<std::uint64_t>::max() / a)
            return std::numeric_limits<std::uint64_t>::max();
        cells *= a;
    }
    return cells;
}

void MarginalSource::check_scope(VertexSet scope) const {
    if (scope.empty()) throw ValidationError("marginal scope must be non-empty");
    if (!scope.subset_of(VertexSet::range(num_vars())))
        throw ValidationError("marginal scope " + scope.to_string() + " has a vertex outside [0, " +
                              std::to_string(num_vars()) + ")");
}

double mutual_information(const MarginalSource& source, int u, int v) {
    if (u == v) throw ValidationError("mutual_information needs two distinct vertices");
    const double mi = source.entropy(VertexSet::single(u)) + source.entropy(VertexSet::single(v)) -
                      source.entropy(VertexSet{u, v});
    if (mi < 0.0 && mi >= -1e-12) return 0.0;
    return mi;
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::vector<VariableSpec> specs, std::vector<std::int32_t> flat_rows)
    : Dataset(std::move(specs), std::move(flat_rows), {}) {}

Dataset::Dataset(std::vector<VariableSpec> specs, std::vector<std::int32_t> flat_rows,
                 std::vector<std::uint64_t> multiplicities)
    : specs_(std::move(specs)), rows_(std::move(flat_rows)), multiplicities_(std::move(multiplicities)) {
    const std::size_t n = specs_.size();
    if (n == 0) throw ValidationError("dataset has no variables");
    if (n > static_cast<std::size_t>(kMaxVertices))
        throw ValidationError("at most 64 variables are supported");
    std::set<std::string> names;
    for (const auto& s : specs_) {
        if (s.arity < 2) throw ValidationError("variable '" + s.name + "' has arity < 2");
        if (!names.insert(s.name).second) throw ValidationError("duplicate variable name '" + s.name + "'");
    }
    if (rows_.size() % n != 0) throw ValidationError("row data is not a multiple of the variable count");
    num_rows_ = rows_.size() / n;
    if (!multiplicities_.empty() && multiplicities_.size() != num_rows_)
        throw ValidationError("multiplicity list does not match row count");

    for (std::size_t r = 0; r < num_rows_; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const auto x = rows_[r * n + c];
            if (x < 0 || x >= specs_[c].arity)
                throw ParseError("outcome " + std::to_string(x) + " outside [0, " +
                                     std::to_string(specs_[c].arity) + ") for '" + specs_[c].name + "'",
                                 static_cast<long>(r + 1), static_cast<long>(c + 1));
        }
        total_ += multiplicity(r);
    }
    if (total_ == 0) throw ValidationError("dataset has no observations");
}

std::span<const std::int32_t> Dataset::row(std::size_t i) const {
    return std::span<const std::int32_t>(rows_).subspan(i * specs_.size(), specs_.size());
}

std::vector<std::uint64_t> Dataset::counts(VertexSet scope) const {
    check_scope(scope);
    const auto members = scope.members();
    const auto ar = scope_arities(*this, scope);
    std::vector<std::uint64_t> out(table_size(ar), 0);
    const std::size_t n = specs_.size();
    for (std::size_t r = 0; r < num_rows_; ++r) {
        const std::int32_t* row = rows_.data() + r * n;
        std::size_t idx = 0;
        for (std::size_t i = 0; i < members.size(); ++i) idx = idx * ar[i] + row[members[i]];
        out[idx] += multiplicity(r);
    }
    return out;
}

MarginalTable Dataset::marginal(VertexSet scope) const {
    const auto c = counts(scope);
    std::vector<double> probs(c.size());
    const double t = static_cast<double>(total_);
    for (std::size_t i = 0; i < c.size(); ++i) probs[i] = static_cast<double>(c[i]) / t;
    return MarginalTable(scope, scope_arities(*this, scope), std::move(probs));
}

std::map<std::vector<int>, std::uint64_t> Dataset::distinct_rows() const {
    std::map<std::vector<int>, std::uint64_t> out;
    for (std::size_t r = 0; r < num_rows_; ++r) {
        auto x = row(r);
        out[std::vector<int>(x.begin(), x.end())] += multiplicity(r);
    }
    return out;
}

double Dataset::joint_entropy() const {
    const double t = static_cast<double>(total_);
    double h = 0.0;
    for (const auto& [x, c] : distinct_rows()) {
        const double p = static_cast<double>(c) / t;
        h -= p * std::log(p);
    }
    return h;
}

void Dataset::for_each_support_point(
    const std::function<void(std::span<const int>, double)>& visit) const {
    const double t = static_cast<double>(total_);
    for (const auto& [x, c] : distinct_rows()) visit(x, static_cast<double>(c) / t);
}

// ---------------------------------------------------------------------------
// JointTable

JointTable::JointTable(std::vector<int> arities, std::vector<double> probs)
    : arities_(std::move(arities)), probs_(std::move(probs)) {
    if (arities_.empty()) throw ValidationError("joint table has no variables");
    if (arities_.size() > static_cast<std::size_t>(kMaxVertices))
        throw ValidationError("at most 64 variables are supported");
    for (int a : arities_)
        if (a < 2) throw ValidationError("joint table arity < 2");
    if (probs_.size() != table_size(arities_)) throw ValidationError("joint table size does not match arities");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw ValidationError("joint table has a negative or NaN entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("joint table does not sum to 1");
}

MarginalTable JointTable::marginal(VertexSet scope) const {
    check_scope(scope);
    const int n = num_vars();
    const auto ar = scope_arities(*this, scope);
    std::vector<double> out(table_size(ar), 0.0);

    // Stride of each variable inside the scope table (0 when not in scope).
    std::vector<std::size_t> stride(n, 0);
    std::size_t s = 1;
    for (int v = n - 1; v >= 0; --v) {
        if (scope.contains(v)) {
            stride[v] = s;
            s *= arities_[v];
        }
    }

    std::vector<int> x(n, 0);
    std::size_t idx = 0;
    for (double p : probs_) {
        out[idx] += p;
        // Odometer increment, last variable fastest.
        for (int v = n - 1; v >= 0; --v) {
            idx += stride[v];
            if (++x[v] < arities_[v]) break;
            idx -= stride[v] * arities_[v];
            x[v] = 0;
        }
    }
    return MarginalTable(scope, ar, std::move(out));
}

double JointTable::joint_entropy() const {
    double h = 0.0;
    for (double p : probs_)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

void JointTable::for_each_support_point(
    const std::function<void(std::span<const int>, double)>& visit) const {
    const int n = num_vars();
    std::vector<int> x(n, 0);
    for (double p : probs_) {
        if (p > 0.0) visit(x, p);
        for (int v = n - 1; v >= 0; --v) {
            if (++x[v] < arities_[v]) break;
            x[v] = 0;
        }
    }
}

double JointTable::prob(std::span<const int> x) const {
    std::size_t idx = 0;
    for (std::size_t v = 0; v < arities_.size(); ++v) {
        if (x[v] < 0 || x[v] >= arities_[v]) throw ValidationError("assignment outside arity");
        idx = idx * arities_[v] + x[v];
    }
    return probs_[idx];
}

// ---------------------------------------------------------------------------
// I/O

Dataset load_dataset(std::istream& in, const ArityOverrides& overrides) {
    std::string line;
    long line_no = 0;
    std::vector<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (trim(line).empty()) throw ParseError("CSV input is empty");
    for (auto cell : split_commas(line)) {
        if (cell.empty()) throw ParseError("empty column name in header", line_no);
        names.emplace_back(cell);
    }
    const std::size_t n = names.size();

    for (const auto& [name, arity] : overrides) {
        if (std::find(names.begin(), names.end(), name) == names.end())
            throw ValidationError("arity sidecar names unknown column '" + name + "'");
    }

    std::vector<std::int32_t> flat;
    std::vector<int> max_code(n, -1);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != n)
            throw ParseError("ragged row: expected " + std::to_string(n) + " cells, got " +
                                 std::to_string(cells.size()),
                             line_no);
        for (std::size_t c = 0; c < n; ++c) {
            std::int32_t value = 0;
            const auto cell = cells[c];
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
                throw ParseError("non-integer cell '" + std::string(cell) + "'", line_no,
                                 static_cast<long>(c + 1));
            if (value < 0) throw ParseError("negative outcome code", line_no, static_cast<long>(c + 1));
            flat.push_back(value);
            max_code[c] = std::max(max_code[c], static_cast<int>(value));
        }
        ++rows;
    }
    if (rows == 0) throw ParseError("CSV has a header but no data rows");

    std::vector<VariableSpec> specs(n);
    for (std::size_t c = 0; c < n; ++c) {
        specs[c].name = names[c];
        auto it = overrides.find(names[c]);
        specs[c].arity = it != overrides.end() ? it->second : std::max(2, max_code[c] + 1);
    }
    return Dataset(std::move(specs), std::move(flat));
}

Dataset load_dataset_file(const std::string& path, const ArityOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return load_dataset(in, overrides);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

ArityOverrides parse_arity_sidecar(const std::string& json_text) {
    ArityOverrides out;
    try {
        const auto j = nlohmann::json::parse(json_text);
        for (const auto& [name, m] : j.at("arities").items()) {
            const int a = m.get<int>();
            if (a < 2) throw ValidationError("sidecar arity for '" + name + "' is < 2");
            out[name] = a;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("arity sidecar: ") + e.what());
    }
    return out;
}

JointTable parse_joint_table(const std::string& json_text) {
    try {
        const auto j = nlohmann::json::parse(json_text);
        return JointTable(j.at("arities").get<std::vector<int>>(), j.at("probs").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("joint table: ") + e.what());
    }
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    const auto& specs = data.specs();
    for (std::size_t c = 0; c < specs.size(); ++c) out << (c ? "," : "") << specs[c].name;
    out << '\n';
    std::string line;
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
        line.clear();
        auto x = data.row(r);
        for (std::size_t c = 0; c < x.size(); ++c) {
            if (c) line += ',';
            line += std::to_string(x[c]);
        }
        line += '\n';
        for (std::uint64_t m = 0; m < data.multiplicity(r); ++m) out << line;
    }
}

}  // namespace hypertree
