#include "swapvote/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include "swapvote/errors.hpp"

namespace swapvote {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    std::string_view field = line.substr(start, pos - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
      field.remove_prefix(1);
    }
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
      field.remove_suffix(1);
    }
    fields.emplace_back(field);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

// Line reader that tracks 1-based line numbers, strips CR and skips blank
// lines.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (number_ == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

double require_real(const std::string& field, std::size_t line,
                    std::string_view what) {
  const std::optional<double> value = parse_real(field);
  if (!value) {
    throw ParseError(line, std::string(what) + " '" + field + "' is not a number");
  }
  return *value;
}

long require_integer(const std::string& field, std::size_t line,
                     std::string_view what) {
  long value = 0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, std::string(what) + " '" + field + "' is not an integer");
  }
  return value;
}

// Checks that `fields` are prefix_1..prefix_d starting at `offset`.
void expect_numbered(const std::vector<std::string>& fields, std::size_t offset,
                     std::size_t d, std::string_view prefix, std::size_t line) {
  for (std::size_t k = 0; k < d; ++k) {
    const std::string want = std::string(prefix) + "_" + std::to_string(k + 1);
    if (fields[offset + k] != want) {
      throw ParseError(line, "header column " + std::to_string(offset + k + 1) +
                                 " is '" + fields[offset + k] + "', expected '" +
                                 want + "'");
    }
  }
}

std::vector<std::string> read_row(LineReader& reader, std::string_view what) {
  std::string line;
  if (!reader.next(line)) {
    throw ParseError(reader.number(), "unexpected end of file, expected " +
                                          std::string(what));
  }
  return split_fields(line);
}

std::string key_value(LineReader& reader, std::string_view key) {
  const std::vector<std::string> fields = read_row(reader, key);
  if (fields.size() != 2 || fields[0] != key) {
    throw ParseError(reader.number(), "expected '" + std::string(key) + ",<value>'");
  }
  return fields[1];
}

void write_numbered_header(std::ostream& out, std::string_view prefix,
                           std::size_t d) {
  for (std::size_t k = 0; k < d; ++k) {
    out << ',' << prefix << '_' << (k + 1);
  }
}

}  // namespace

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::optional<double> parse_real(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

// ---------------------------------------------------------------------------
// Comparisons

std::vector<ComparisonRecord> parse_comparisons(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header row");
  const std::vector<std::string> header = split_fields(line);
  if (header.size() < 3 || header.size() % 2 == 0 || header[0] != "voter_id") {
    throw ParseError(reader.number(),
                     "header must be voter_id,c_1..c_d,r_1..r_d");
  }
  const std::size_t d = (header.size() - 1) / 2;
  expect_numbered(header, 1, d, "c", reader.number());
  expect_numbered(header, 1 + d, d, "r", reader.number());

  std::vector<ComparisonRecord> records;
  while (reader.next(line)) {
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(reader.number(),
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(reader.number(), "empty voter_id");
    ComparisonRecord record;
    record.voter_id = fields[0];
    for (std::size_t k = 0; k < d; ++k) {
      record.chosen.push_back(require_real(fields[1 + k], reader.number(), "field"));
      record.rejected.push_back(
          require_real(fields[1 + d + k], reader.number(), "field"));
    }
    records.push_back(std::move(record));
  }
  return records;
}

void write_comparisons(std::ostream& out,
                       const std::vector<ComparisonRecord>& records) {
  const std::size_t d = records.empty() ? 0 : records.front().chosen.size();
  out << "voter_id";
  write_numbered_header(out, "c", d);
  write_numbered_header(out, "r", d);
  out << '\n';
  for (const ComparisonRecord& r : records) {
    out << r.voter_id;
    for (double v : r.chosen) out << ',' << format_real(v);
    for (double v : r.rejected) out << ',' << format_real(v);
    out << '\n';
  }
}

std::vector<VoterData> group_by_voter(const std::vector<ComparisonRecord>& records) {
  std::vector<VoterData> voters;
  std::map<std::string, std::size_t> index;
  for (const ComparisonRecord& r : records) {
    auto [it, inserted] = index.emplace(r.voter_id, voters.size());
    if (inserted) voters.push_back({r.voter_id, {}});
    voters[it->second].comparisons.push_back({r.chosen, r.rejected});
  }
  return voters;
}

// ---------------------------------------------------------------------------
// Alternatives

std::vector<Alternative> parse_alternatives(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header row");
  const std::vector<std::string> header = split_fields(line);
  if (header.size() < 2 || header[0] != "id") {
    throw ParseError(reader.number(), "header must be id,f_1..f_d");
  }
  const std::size_t d = header.size() - 1;
  expect_numbered(header, 1, d, "f", reader.number());

  std::vector<Alternative> alts;
  std::map<std::string, std::size_t> seen;
  while (reader.next(line)) {
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ParseError(reader.number(),
                       "expected " + std::to_string(header.size()) +
                           " fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(reader.number(), "empty id");
    if (!seen.emplace(fields[0], reader.number()).second) {
      throw ParseError(reader.number(), "duplicate id '" + fields[0] + "'");
    }
    Alternative alt{fields[0], {}};
    for (std::size_t k = 0; k < d; ++k) {
      alt.features.push_back(require_real(fields[1 + k], reader.number(), "feature"));
    }
    alts.push_back(std::move(alt));
  }
  return alts;
}

void write_alternatives(std::ostream& out,
                        const std::vector<Alternative>& alternatives) {
  const std::size_t d = alternatives.empty() ? 0 : alternatives.front().features.size();
  out << "id";
  write_numbered_header(out, "f", d);
  out << '\n';
  for (const Alternative& a : alternatives) {
    out << a.id;
    for (double v : a.features) out << ',' << format_real(v);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Profiles

AnonymousProfile parse_profile(std::istream& in) {
  LineReader reader(in);
  std::string line;
  if (!reader.next(line)) throw ParseError(1, "missing header row");
  if (split_fields(line) != std::vector<std::string>{"weight", "ranking"}) {
    throw ParseError(reader.number(), "header must be weight,ranking");
  }
  std::map<Ranking, double> weights;
  std::vector<AltId> ground;
  while (reader.next(line)) {
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 2) {
      throw ParseError(reader.number(), "expected weight,ranking");
    }
    const double w = require_real(fields[0], reader.number(), "weight");
    try {
      Ranking ranking = Ranking::parse(fields[1]);
      if (ground.empty()) {
        ground = ranking.order();
      }
      weights[std::move(ranking)] += w;
    } catch (const DomainError& e) {
      throw ParseError(reader.number(), e.what());
    }
  }
  if (weights.empty()) throw ParseError(reader.number(), "profile has no rankings");
  try {
    return AnonymousProfile(std::move(ground), std::move(weights));
  } catch (const DomainError& e) {
    throw ParseError(0, e.what());
  }
}

void write_profile(std::ostream& out, const AnonymousProfile& profile) {
  out << "weight,ranking\n";
  for (const auto& [ranking, w] : profile.support()) {
    out << format_real(w) << ',' << ranking.to_string() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Models

void write_model(std::ostream& out, const ModelFile& model) {
  const bool voters = model.kind == ModelFile::Kind::kVoters;
  out << "swapvote-model," << model.version << ','
      << (voters ? "voters" : "summary") << '\n';
  out << "d," << model.d << '\n';
  if (!voters) out << "n_voters," << model.summary.n_voters << '\n';
  out << "l2_penalty," << format_real(model.fit.l2_penalty) << '\n';
  out << "gradient_tolerance," << format_real(model.fit.gradient_tolerance) << '\n';
  out << "max_iterations," << model.fit.max_iterations << '\n';
  if (voters) {
    out << "voter_id,converged,iterations,objective";
    write_numbered_header(out, "b", model.d);
    out << '\n';
    for (const VoterModel& v : model.voters) {
      out << v.voter_id << ',' << (v.converged ? 1 : 0) << ',' << v.iterations
          << ',' << format_real(v.objective);
      for (double b : v.beta) out << ',' << format_real(b);
      out << '\n';
    }
  } else {
    for (std::size_t k = 0; k < model.d; ++k) {
      out << (k == 0 ? "" : ",") << "b_" << (k + 1);
    }
    out << '\n';
    for (std::size_t k = 0; k < model.summary.beta_hat.size(); ++k) {
      out << (k == 0 ? "" : ",") << format_real(model.summary.beta_hat[k]);
    }
    out << '\n';
  }
}

ModelFile read_model(std::istream& in) {
  LineReader reader(in);
  ModelFile model;
  const std::vector<std::string> magic = read_row(reader, "model header");
  if (magic.size() != 3 || magic[0] != "swapvote-model") {
    throw ParseError(reader.number(), "not a swapvote model file");
  }
  model.version = static_cast<int>(require_integer(magic[1], reader.number(), "version"));
  if (model.version != kModelFormatVersion) {
    throw ParseError(reader.number(),
                     "unsupported model format version " + magic[1]);
  }
  if (magic[2] == "voters") {
    model.kind = ModelFile::Kind::kVoters;
  } else if (magic[2] == "summary") {
    model.kind = ModelFile::Kind::kSummary;
  } else {
    throw ParseError(reader.number(), "unknown model kind '" + magic[2] + "'");
  }
  const long d = require_integer(key_value(reader, "d"), reader.number(), "d");
  if (d <= 0) throw ParseError(reader.number(), "d must be positive");
  model.d = static_cast<std::size_t>(d);
  if (model.kind == ModelFile::Kind::kSummary) {
    const long n = require_integer(key_value(reader, "n_voters"), reader.number(),
                                   "n_voters");
    if (n < 1) throw ParseError(reader.number(), "n_voters must be >= 1");
    model.summary.n_voters = static_cast<std::size_t>(n);
  }
  model.fit.l2_penalty =
      require_real(key_value(reader, "l2_penalty"), reader.number(), "l2_penalty");
  model.fit.gradient_tolerance = require_real(
      key_value(reader, "gradient_tolerance"), reader.number(), "gradient_tolerance");
  model.fit.max_iterations = static_cast<int>(require_integer(
      key_value(reader, "max_iterations"), reader.number(), "max_iterations"));

  if (model.kind == ModelFile::Kind::kVoters) {
    const std::vector<std::string> header = read_row(reader, "voter header");
    if (header.size() != 4 + model.d || header[0] != "voter_id" ||
        header[1] != "converged" || header[2] != "iterations" ||
        header[3] != "objective") {
      throw ParseError(reader.number(),
                       "voter header must be voter_id,converged,iterations,"
                       "objective,b_1..b_d");
    }
    expect_numbered(header, 4, model.d, "b", reader.number());
    std::string line;
    while (reader.next(line)) {
      const std::vector<std::string> fields = split_fields(line);
      if (fields.size() != header.size()) {
        throw ParseError(reader.number(), "expected " + std::to_string(header.size()) +
                                              " fields, found " +
                                              std::to_string(fields.size()));
      }
      VoterModel v;
      v.voter_id = fields[0];
      if (v.voter_id.empty()) throw ParseError(reader.number(), "empty voter_id");
      const long converged = require_integer(fields[1], reader.number(), "converged");
      if (converged != 0 && converged != 1) {
        throw ParseError(reader.number(), "converged must be 0 or 1");
      }
      v.converged = converged == 1;
      v.iterations = static_cast<int>(require_integer(fields[2], reader.number(), "iterations"));
      v.objective = require_real(fields[3], reader.number(), "objective");
      for (std::size_t k = 0; k < model.d; ++k) {
        v.beta.push_back(require_real(fields[4 + k], reader.number(), "coefficient"));
      }
      model.voters.push_back(std::move(v));
    }
    if (model.voters.empty()) throw ParseError(reader.number(), "model file has no voters");
  } else {
    const std::vector<std::string> header = read_row(reader, "coefficient header");
    if (header.size() != model.d) {
      throw ParseError(reader.number(), "expected " + std::to_string(model.d) +
                                            " coefficient columns");
    }
    expect_numbered(header, 0, model.d, "b", reader.number());
    const std::vector<std::string> row = read_row(reader, "coefficient row");
    if (row.size() != model.d) {
      throw ParseError(reader.number(), "expected " + std::to_string(model.d) +
                                            " coefficients");
    }
    for (const std::string& field : row) {
      model.summary.beta_hat.push_back(require_real(field, reader.number(), "coefficient"));
    }
    std::string extra;
    if (reader.next(extra)) throw ParseError(reader.number(), "trailing content");
  }
  return model;
}

// ---------------------------------------------------------------------------
// Curves

void write_curve(std::ostream& out, const AccuracyCurve& curve) {
  out << "x,mean_accuracy,stderr\n";
  char buffer[96];
  for (std::size_t i = 0; i < curve.x_values.size(); ++i) {
    std::snprintf(buffer, sizeof buffer, "%g,%.6f,%.6f\n", curve.x_values[i],
                  curve.mean_accuracy[i], curve.standard_error[i]);
    out << buffer;
  }
}

}  // namespace swapvote
