#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hurst/rng.hpp"
#include "hurst/tape.hpp"

using namespace hurst;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / ("hurst_tape_" + name);
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    return path;
}

TradeRecord make_record(double seconds, const std::string& price, std::int64_t size,
                        const std::string& cond = "@", int corr = 0, const std::string& tag = "N") {
    TradeRecord rec;
    rec.time_ns = static_cast<std::int64_t>(seconds * 1e9);
    rec.price = Decimal::parse(price, "price");
    rec.size = size;
    rec.sale_condition = cond;
    rec.correction = corr;
    rec.exchange_tag = tag;
    return rec;
}

}  // namespace

TEST_CASE("a plain row decodes field by field") {
    const auto rec = parse_trade_line("09:30:01.000,27.15,300,@,0,N");
    REQUIRE(rec.time_ns == 34201'000'000'000LL);
    REQUIRE(rec.timestamp() == 34201.0);
    REQUIRE(rec.price == Decimal::parse("27.15"));
    REQUIRE(rec.price.to_string() == "27.15");
    REQUIRE(rec.size == 300);
    REQUIRE(rec.sale_condition == "@");
    REQUIRE(rec.correction == 0);
    REQUIRE(rec.exchange_tag == "N");
}

TEST_CASE("a malformed price names the price field") {
    try {
        parse_trade_line("09:30:01,abc,300,@,0,N");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.field() == "price");
    }
}

TEST_CASE("malformed time, size, and correction name their fields") {
    auto field_of = [](const char* line) {
        try {
            parse_trade_line(line);
        } catch (const ParseError& e) {
            return e.field();
        }
        return std::string("no-error");
    };
    REQUIRE(field_of("9:30:01,10.00,100,@,0,N") == "time");
    REQUIRE(field_of("09:30:01,10.00,1e2,@,0,N") == "size");
    REQUIRE(field_of("09:30:01,10.00,100,@,x,N") == "correction");
    REQUIRE(field_of("09:30:01,10.00,100,@,0") == "line");
}

TEST_CASE("parsing succeeds outside the session; filtering is separate") {
    const auto rec = parse_trade_line("16:30:00,10.00,100,@,0,N");
    REQUIRE(rec.timestamp() == 59400.0);
    REQUIRE(filter_trade(rec) == DropReason::outside_session);
}

TEST_CASE("sub-second timestamps are preserved through a round trip") {
    const auto rec = parse_trade_line("09:30:01.25,10.05,100,@,0,N");
    REQUIRE(rec.time_ns == 34201'250'000'000LL);
    const auto text = serialize_trade_line(rec);
    REQUIRE(text == "09:30:01.25,10.05,100,@,0,N");
    REQUIRE(parse_trade_line(text) == rec);
}

TEST_CASE("condition exclusions follow the default policy") {
    REQUIRE(filter_trade(make_record(40000, "10.00", 100, "Z")) == DropReason::excluded_condition);
    REQUIRE(filter_trade(make_record(40000, "10.00", 100, "B")) == DropReason::excluded_condition);
    REQUIRE_FALSE(filter_trade(make_record(40000, "10.00", 100, "@")).has_value());
    REQUIRE_FALSE(filter_trade(make_record(40000, "10.00", 100, "")).has_value());
    REQUIRE_FALSE(filter_trade(make_record(40000, "10.00", 100, "F")).has_value());
}

TEST_CASE("codes 4 and 6 only apply on NASDAQ-style venues") {
    REQUIRE_FALSE(filter_trade(make_record(40000, "10.00", 100, "4", 0, "N")).has_value());
    REQUIRE(filter_trade(make_record(40000, "10.00", 100, "4", 0, "Q")) == DropReason::excluded_condition);
    REQUIRE(filter_trade(make_record(40000, "10.00", 100, "6", 0, "T")) == DropReason::excluded_condition);
}

TEST_CASE("corrections 0, 1, 2 pass; everything else drops") {
    REQUIRE_FALSE(filter_trade(make_record(40000, "10.00", 100, "@", 1)).has_value());
    REQUIRE_FALSE(filter_trade(make_record(40000, "10.00", 100, "@", 2)).has_value());
    REQUIRE(filter_trade(make_record(40000, "10.00", 100, "@", 3)) == DropReason::bad_correction);
    REQUIRE(filter_trade(make_record(40000, "10.00", 100, "@", -1)) == DropReason::bad_correction);
}

TEST_CASE("non-positive price and size drop, never repaired") {
    REQUIRE(filter_trade(make_record(40000, "-10.00", 100)) == DropReason::non_positive_price);
    REQUIRE(filter_trade(make_record(40000, "0.00", 100)) == DropReason::non_positive_price);
    REQUIRE(filter_trade(make_record(40000, "10.00", -100)) == DropReason::non_positive_size);
    REQUIRE(filter_trade(make_record(40000, "10.00", 0)) == DropReason::non_positive_size);
}

TEST_CASE("session boundaries are inclusive; tail trim hits NASDAQ only") {
    REQUIRE_FALSE(filter_trade(make_record(34200, "10.00", 100)).has_value());
    REQUIRE_FALSE(filter_trade(make_record(57600, "10.00", 100)).has_value());
    REQUIRE(filter_trade(make_record(34199, "10.00", 100)) == DropReason::outside_session);
    REQUIRE(filter_trade(make_record(57601, "10.00", 100)) == DropReason::outside_session);

    REQUIRE(filter_trade(make_record(57585, "10.00", 100, "@", 0, "Q")) == DropReason::tail_trim);
    REQUIRE(filter_trade(make_record(57570, "10.00", 100, "@", 0, "Q")) == DropReason::tail_trim);
    REQUIRE_FALSE(filter_trade(make_record(57569, "10.00", 100, "@", 0, "Q")).has_value());
    REQUIRE_FALSE(filter_trade(make_record(57585, "10.00", 100, "@", 0, "N")).has_value());
}

TEST_CASE("filtering is per-record and idempotent") {
    const auto rec = make_record(40000, "10.00", 100, "Z");
    REQUIRE(filter_trade(rec) == filter_trade(rec));
}

TEST_CASE("load_session counts drops and keeps the rest") {
    std::string content;
    for (int i = 0; i < 8; ++i)
        content += "10:00:0" + std::to_string(i) + ",10.00,100,@,0,N\n";
    content += "10:01:00,10.00,100,T,0,N\n";
    content += "10:01:01,10.00,100,T,0,N\n";
    const auto path = temp_file("drops.csv", content);

    const auto tape = load_session(path, "XX", Date{2005, 3, 14});
    REQUIRE(tape.records.size() == 8);
    REQUIRE(tape.drop_log.at(DropReason::excluded_condition) == 2);
    REQUIRE(tape.drop_log.total() == 2);
    REQUIRE(tape.records.size() + tape.drop_log.total() == 10);
    fs::remove(path);
}

TEST_CASE("rows out of time order come back sorted, stably") {
    const auto path = temp_file("order.csv",
                                "10:00:02,10.00,100,@,0,N\n"
                                "10:00:01,11.00,100,@,0,N\n"
                                "10:00:01,12.00,100,@,0,N\n"
                                "10:00:00,13.00,100,@,0,N\n");
    const auto tape = load_session(path, "XX", Date{2005, 3, 14});
    REQUIRE(tape.records.size() == 4);
    REQUIRE(tape.records[0].price == Decimal::parse("13.00"));
    REQUIRE(tape.records[1].price == Decimal::parse("11.00"));  // input order preserved on ties
    REQUIRE(tape.records[2].price == Decimal::parse("12.00"));
    REQUIRE(tape.records[3].price == Decimal::parse("10.00"));
    fs::remove(path);
}

TEST_CASE("an empty file is an empty tape, not an error") {
    const auto path = temp_file("empty.csv", "");
    const auto tape = load_session(path, "XX", Date{2005, 3, 14});
    REQUIRE(tape.records.empty());
    REQUIRE(tape.drop_log.empty());
    fs::remove(path);
}

TEST_CASE("a missing file is an IO error") {
    REQUIRE_THROWS_AS(load_session("/nonexistent/nowhere.csv", "XX", Date{2005, 3, 14}), IoError);
}

TEST_CASE("a header row is detected by its non-numeric price") {
    const auto path = temp_file("header.csv",
                                "time,price,size,sale_condition,correction,exchange\n"
                                "10:00:00,10.00,100,@,0,N\n");
    const auto tape = load_session(path, "XX", Date{2005, 3, 14});
    REQUIRE(tape.records.size() == 1);
    fs::remove(path);
}

TEST_CASE("a parse error in a body row reports file and line") {
    const auto path = temp_file("bad.csv",
                                "10:00:00,10.00,100,@,0,N\n"
                                "10:00:01,oops,100,@,0,N\n");
    try {
        load_session(path, "XX", Date{2005, 3, 14});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.field() == "price");
        REQUIRE(std::string(e.what()).find(":2:") != std::string::npos);
    }
    fs::remove(path);
}

TEST_CASE("NASDAQ sessions record the applied tail trim in the window") {
    const auto nyse = temp_file("nyse.csv", "10:00:00,10.00,100,@,0,N\n");
    const auto nasdaq = temp_file("nasdaq.csv", "10:00:00,10.00,100,@,0,Q\n");
    REQUIRE(load_session(nyse, "XX", Date{2005, 3, 14}).window.trim == 0);
    REQUIRE(load_session(nasdaq, "XX", Date{2005, 3, 14}).window.trim == 30);
    REQUIRE(load_session(nyse, "XX", Date{2005, 3, 14}).window.covered_seconds() == 23400);
    REQUIRE(load_session(nasdaq, "XX", Date{2005, 3, 14}).window.covered_seconds() == 23370);
    fs::remove(nyse);
    fs::remove(nasdaq);
}

TEST_CASE("kept plus dropped always equals parsed rows") {
    SplitMix64 gen(123);
    std::string content;
    std::size_t rows = 0;
    for (int i = 0; i < 500; ++i) {
        const int hh = 9 + static_cast<int>(gen.bounded(8));
        const int mm = static_cast<int>(gen.bounded(60));
        const int ss = static_cast<int>(gen.bounded(60));
        char line[96];
        const char* cond = (gen.bounded(4) == 0) ? "T" : "@";
        const long long size = static_cast<long long>(gen.bounded(3000)) - 200;
        std::snprintf(line, sizeof(line), "%02d:%02d:%02d,%.2f,%lld,%s,%d,%s\n", hh, mm, ss,
                      1.0 + 100.0 * gen.uniform(), size, cond, static_cast<int>(gen.bounded(5)),
                      gen.bounded(2) ? "N" : "Q");
        content += line;
        ++rows;
    }
    const auto path = temp_file("mix.csv", content);
    const auto tape = load_session(path, "XX", Date{2005, 3, 14});
    REQUIRE(tape.records.size() + tape.drop_log.total() == rows);
    fs::remove(path);
}

TEST_CASE("serialize then re-parse reproduces the tape") {
    TradeTape tape;
    tape.symbol = "XX";
    tape.session_date = Date{2005, 3, 14};
    SplitMix64 gen(9);
    for (int i = 0; i < 200; ++i) {
        char price[32];
        std::snprintf(price, sizeof(price), "%.4f", 1.0 + 50.0 * gen.uniform());
        tape.records.push_back(make_record(34200.0 + static_cast<double>(i) +
                                               static_cast<double>(gen.bounded(1000)) / 1000.0,
                                           price, 1 + static_cast<std::int64_t>(gen.bounded(5000))));
    }
    std::stable_sort(tape.records.begin(), tape.records.end(),
                     [](const TradeRecord& a, const TradeRecord& b) { return a.time_ns < b.time_ns; });

    const fs::path path = fs::temp_directory_path() / "hurst_tape_roundtrip.csv";
    save_tape(tape, path);
    const auto reload = load_session(path, "XX", Date{2005, 3, 14});
    REQUIRE(reload.records == tape.records);
    REQUIRE(reload.drop_log.empty());
    fs::remove(path);
}

TEST_CASE("column schema parses permutations and rejects bad descriptors") {
    const auto schema = ColumnSchema::parse("price,time,size,cond,corr,ex");
    const auto rec = parse_trade_line("27.15,09:30:01,300,@,0,N", schema);
    REQUIRE(rec.price == Decimal::parse("27.15"));
    REQUIRE(rec.time_ns == 34201'000'000'000LL);

    REQUIRE_THROWS_AS(ColumnSchema::parse("time,price,size"), ConfigError);
    REQUIRE_THROWS_AS(ColumnSchema::parse("time,time,price,size,cond,corr"), ConfigError);
    REQUIRE_THROWS_AS(ColumnSchema::parse("time,price,size,cond,corr,volume"), ConfigError);
}

TEST_CASE("decimal parsing keeps full precision and rejects junk") {
    REQUIRE(Decimal::parse("27.15").mantissa == 2715);
    REQUIRE(Decimal::parse("27.15").scale == 2);
    REQUIRE(Decimal::parse("27.15").to_double() == 27.15);
    REQUIRE(Decimal::parse("0.0001").to_string() == "0.0001");
    REQUIRE(Decimal::parse("-3.50") == Decimal::parse("-3.5"));
    REQUIRE(Decimal::parse("10") == Decimal::parse("10.000"));
    REQUIRE_THROWS_AS(Decimal::parse(""), ParseError);
    REQUIRE_THROWS_AS(Decimal::parse("1.2.3"), ParseError);
    REQUIRE_THROWS_AS(Decimal::parse("12a"), ParseError);
    REQUIRE_THROWS_AS(Decimal::parse("."), ParseError);
    REQUIRE_THROWS_AS(Decimal::parse("1.0000000001"), ParseError);  // > 9 fraction digits
}
