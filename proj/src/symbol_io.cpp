#include "fracdd/symbol_io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fracdd/errors.hpp"

namespace fracdd {

namespace {

constexpr std::array<char, 4> kMagic{'F', 'S', 'Y', 'M'};

template <typename T>
void put_le(std::ostream& out, T value) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const auto bits = std::bit_cast<U>(value);
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t k = 0; k < sizeof(U); ++k) {
        bytes[k] = static_cast<char>((bits >> (8 * k)) & 0xFFu);
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

template <typename T>
bool get_le(std::istream& in, T& value) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    std::array<unsigned char, sizeof(U)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
        return false;
    }
    U bits = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) {
        bits |= static_cast<U>(bytes[k]) << (8 * k);
    }
    value = std::bit_cast<T>(bits);
    return true;
}

template <typename T>
T require(std::istream& in, const char* what) {
    T value{};
    if (!get_le(in, value)) {
        throw ConfigError(std::string("truncated symbol file while reading ") + what);
    }
    return value;
}

} // namespace

void write_symbol(std::ostream& out, const FractionalOperator& op) {
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kSymbolFormatVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(op.cells_per_axis()));
    const auto& dirs = op.measure().directions();
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dirs.size()));
    put_le<double>(out, op.alpha());
    put_le<double>(out, op.c());
    for (const auto& d : dirs) {
        put_le<double>(out, d.theta);
        put_le<double>(out, d.weight);
    }
    const auto& symbol = op.symbol();
    const int r = symbol.radius();
    for (int dj = -r; dj <= r; ++dj) {
        for (int di = -r; di <= r; ++di) {
            const double v = symbol.at({di, dj});
            if (v != 0.0) {
                put_le<std::int32_t>(out, di);
                put_le<std::int32_t>(out, dj);
                put_le<double>(out, v);
            }
        }
    }
    if (!out) {
        throw ConfigError("failed writing symbol data");
    }
}

FractionalOperator read_symbol(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw ConfigError("not a symbol file (bad magic)");
    }
    const auto version = require<std::uint32_t>(in, "version");
    if (version != kSymbolFormatVersion) {
        throw ConfigError("unsupported symbol format version " + std::to_string(version));
    }
    const auto n = require<std::uint32_t>(in, "n");
    const auto count = require<std::uint32_t>(in, "direction count");
    if (n < 2 || n > 1u << 16 || count > 1u << 16) {
        throw ConfigError("implausible symbol header");
    }
    const auto alpha = require<double>(in, "alpha");
    const auto c = require<double>(in, "c");
    std::vector<Direction> dirs(count);
    for (auto& d : dirs) {
        d.theta = require<double>(in, "direction angle");
        d.weight = require<double>(in, "direction weight");
    }

    const int reach = static_cast<int>(n) - 2;
    OffsetTable symbol(reach);
    std::vector<bool> seen(symbol.side() * symbol.side(), false);
    while (true) {
        if (in.peek() == std::char_traits<char>::eof()) {
            break;
        }
        const auto di = require<std::int32_t>(in, "entry offset");
        const auto dj = require<std::int32_t>(in, "entry offset");
        const auto value = require<double>(in, "entry value");
        if (!symbol.in_window({di, dj})) {
            throw ConfigError("symbol entry offset outside the mesh window");
        }
        const auto slot = static_cast<std::size_t>(dj + reach) * symbol.side() + static_cast<std::size_t>(di + reach);
        if (seen[slot] || !std::isfinite(value)) {
            throw ConfigError("duplicate or non-finite symbol entry");
        }
        seen[slot] = true;
        symbol.ref({di, dj}) = value;
    }
    if (symbol.asymmetry() > 1e-13) {
        throw ConfigError("symbol file violates symbol[d] = symbol[-d]");
    }
    return FractionalOperator(static_cast<int>(n), alpha, c, DirectionalMeasure(std::move(dirs)), std::move(symbol));
}

void save_symbol(const std::filesystem::path& path, const FractionalOperator& op) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot open " + path.string() + " for writing");
    }
    write_symbol(out, op);
}

FractionalOperator load_symbol(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    return read_symbol(in);
}

} // namespace fracdd
