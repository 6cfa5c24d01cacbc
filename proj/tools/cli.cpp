#include "cli.hpp"

#include "ric/arithcode.hpp"
#include "ric/criteria.hpp"
#include "ric/histogram.hpp"
#include "ric/image.hpp"
#include "ric/markov.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace ric::cli {

namespace {

constexpr std::size_t kMaxOrder = 24;
constexpr std::size_t kMaxLength = 100'000'000;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Writes to path, or to out when path is empty.
void emit(const std::string& path, const std::string& data, std::ostream& out)
{
    if (path.empty()) {
        out << data;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << data)) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
}

// Attaches the input path to format errors.
template <class F>
auto parse_input(const std::string& path, F&& parse)
{
    try {
        return parse(read_file(path));
    } catch (const std::exception& e) {
        const std::string what = e.what();
        if (what.find(path) != std::string::npos) {
            throw;
        }
        throw std::runtime_error(path + ": " + what);
    }
}

SequenceFile load_sequence(const std::string& path)
{
    return parse_input(path, [](const std::string& text) {
        std::istringstream in(text);
        return read_sequence(in);
    });
}

std::string format_sequence(const SymbolSeq& seq, std::size_t order)
{
    std::ostringstream os;
    write_sequence(os, seq, order);
    return os.str();
}

std::vector<double> load_sample(const std::string& path)
{
    return parse_input(path, [](const std::string& text) {
        std::istringstream in(text);
        std::vector<double> values;
        std::string token;
        std::size_t line = 0;
        while (std::getline(in, token)) {
            ++line;
            if (token.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || token.find_first_not_of(" \t\r", used) != std::string::npos) {
                throw std::runtime_error("line " + std::to_string(line) + ": not a real number");
            }
            values.push_back(v);
        }
        return values;
    });
}

std::string format_sample(const std::vector<double>& values)
{
    std::string out;
    char buf[64];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out += buf;
    }
    return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Arithmetic coding, RIC order selection and MDL histograms"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    std::uint64_t seed = kDefaultSeed;
    std::size_t length = 0;
    std::size_t k_max = 7;
    std::optional<std::size_t> order;
    bool exact = false;
    double lo = -5.0;
    double hi = 5.0;
    double step = 0.02;
    std::optional<double> precision;
    std::string binned_path;
    std::string partition_path;
    std::string report_path;

    auto* simulate_cmd = app.add_subcommand("simulate", "simulate a Markov chain from a model file");
    simulate_cmd->add_option("model", input, "model file")->required();
    simulate_cmd->add_option("-n,--length", length, "sequence length")->required()->check(CLI::Range(std::size_t{0}, kMaxLength));
    simulate_cmd->add_option("--seed", seed, "random seed");
    simulate_cmd->add_option("-o,--output", output, "sequence file (default stdout)");

    auto* encode_cmd = app.add_subcommand("encode", "adaptive arithmetic coding of a sequence file");
    encode_cmd->add_option("sequence", input, "sequence file")->required();
    encode_cmd->add_option("-k,--order", order, "coding order (default: the file's order)")->check(CLI::Range(std::size_t{0}, kMaxOrder));
    encode_cmd->add_option("-o,--output", output, "RIC1 code file (default stdout)");

    auto* decode_cmd = app.add_subcommand("decode", "decode a RIC1 code file");
    decode_cmd->add_option("code", input, "RIC1 code file")->required();
    decode_cmd->add_option("-o,--output", output, "sequence file (default stdout)");

    auto* select_cmd = app.add_subcommand("order-select", "select the Markov order per criterion");
    select_cmd->add_option("sequence", input, "sequence file")->required();
    select_cmd->add_option("--kmax", k_max, "largest order considered")->check(CLI::Range(std::size_t{0}, kMaxOrder));

    auto* curve_cmd = app.add_subcommand("curve", "criterion curves per order as CSV");
    curve_cmd->add_option("sequence", input, "sequence file")->required();
    curve_cmd->add_option("--kmax", k_max, "largest order considered")->check(CLI::Range(std::size_t{0}, kMaxOrder));
    curve_cmd->add_flag("--exact", exact, "use exact coder lengths instead of the floating-point path");
    curve_cmd->add_option("-o,--output", output, "CSV file (default stdout)");

    auto* hist_cmd = app.add_subcommand("hist-select", "MDL sub-partition of a regular histogram grid");
    auto* sample_opt = hist_cmd->add_option("sample", input, "sample file, one real per line");
    auto* binned_opt = hist_cmd->add_option("--binned", binned_path, "binned sample JSON (e.g. from img-hist)");
    sample_opt->excludes(binned_opt);
    hist_cmd->add_option("--lo", lo, "grid lower bound");
    hist_cmd->add_option("--hi", hi, "grid upper bound");
    hist_cmd->add_option("--step", step, "grid step")->check(CLI::PositiveNumber);
    hist_cmd->add_option("--precision", precision, "machine precision r; adds the -n log2 r term")->check(CLI::PositiveNumber);
    hist_cmd->add_option("-o,--output", output, "partition JSON (default stdout)");

    auto* laplace_cmd = app.add_subcommand("sample-laplace", "draw a Laplace(0,1) sample restricted to [lo,hi]");
    laplace_cmd->add_option("-n,--count", length, "sample size")->required()->check(CLI::Range(std::size_t{0}, kMaxLength));
    laplace_cmd->add_option("--seed", seed, "random seed");
    laplace_cmd->add_option("--lo", lo, "lower bound (< 0)");
    laplace_cmd->add_option("--hi", hi, "upper bound (> 0)");
    laplace_cmd->add_option("-o,--output", output, "sample file (default stdout)");

    auto* img_hist_cmd = app.add_subcommand("img-hist", "256-level histogram of a PGM image as JSON");
    img_hist_cmd->add_option("image", input, "PGM file")->required();
    img_hist_cmd->add_option("-o,--output", output, "binned sample JSON (default stdout)");

    auto* img_q_cmd = app.add_subcommand("img-quantize", "quantize a PGM image onto a partition");
    img_q_cmd->add_option("image", input, "PGM file")->required();
    img_q_cmd->add_option("-p,--partition", partition_path, "partition JSON over the 256 gray levels (default: MDL selection)");
    img_q_cmd->add_option("-o,--output", output, "quantized PGM")->required();
    img_q_cmd->add_option("--report", report_path, "quantization report JSON (default stdout)");

    std::vector<const char*> argv{"ric"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*simulate_cmd) {
            const auto model = parse_input(input, [](const std::string& text) {
                std::istringstream in(text);
                return read_model(in);
            });
            emit(output, format_sequence(simulate(model, length, seed), model.order()), out);
        } else if (*encode_cmd) {
            const auto file = load_sequence(input);
            const auto enc = encode_adaptive(file.seq, order.value_or(file.order), false);
            emit(output, write_code_file(enc.message), out);
        } else if (*decode_cmd) {
            const auto msg = parse_input(input, [](const std::string& bytes) { return read_code_file(bytes); });
            emit(output, format_sequence(decode_adaptive(msg), msg.order), out);
        } else if (*select_cmd) {
            const auto file = load_sequence(input);
            if (file.seq.size() <= k_max) {
                throw std::runtime_error(input + ": sequence length must exceed --kmax");
            }
            for (auto c : {Criterion::Ric, Criterion::Mv, Criterion::AdaptiveLength}) {
                out << to_string(c) << ' ' << select_order(file.seq, k_max, c) << '\n';
            }
        } else if (*curve_cmd) {
            const auto file = load_sequence(input);
            if (file.seq.size() <= k_max) {
                throw std::runtime_error(input + ": sequence length must exceed --kmax");
            }
            std::ostringstream csv;
            write_curve_csv(csv, criterion_curve(file.seq, k_max, exact));
            emit(output, csv.str(), out);
        } else if (*hist_cmd) {
            std::optional<BinnedSample> binned;
            if (!binned_path.empty()) {
                binned = parse_input(binned_path, [](const std::string& text) { return binned_from_json(text); });
                if (precision) {
                    binned->precision = precision;
                }
            } else if (!input.empty()) {
                const auto data = load_sample(input);
                const auto grid = CellGrid::regular(lo, hi, step);
                try {
                    binned = bin_sample(data, grid, precision);
                } catch (const std::out_of_range& e) {
                    throw std::runtime_error(input + ": " + e.what());
                }
            } else {
                throw std::runtime_error("hist-select needs a sample file or --binned");
            }
            if (binned->n == 0) {
                throw std::runtime_error("hist-select: the sample is empty");
            }
            const auto selection = dp_select(*binned);
            emit(output, partition_json(*binned, selection) + "\n", out);
        } else if (*laplace_cmd) {
            emit(output, format_sample(sample_laplace(length, seed, lo, hi)), out);
        } else if (*img_hist_cmd) {
            const auto img = parse_input(input, [](const std::string& bytes) { return read_pgm(bytes); });
            emit(output, binned_json(gray_histogram(img)) + "\n", out);
        } else if (*img_q_cmd) {
            const auto img = parse_input(input, [](const std::string& bytes) { return read_pgm(bytes); });
            const auto hist = gray_histogram(img);
            const SubPartition part = partition_path.empty()
                ? dp_select(hist).partition
                : parse_input(partition_path,
                              [&hist](const std::string& text) { return partition_from_json(text, hist.grid); });
            const auto quantizer = make_quantizer(hist, part);
            const auto result = quantizer.apply(img);
            emit(output, write_pgm(result), out);
            emit(report_path, quantization_report_json(quantizer, psnr(img, result)) + "\n", out);
        }
    } catch (const std::exception& e) {
        err << "ric " << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace ric::cli
