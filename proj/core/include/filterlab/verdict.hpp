#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace filterlab {

enum class Status { Proved, Refuted, Unknown };

constexpr std::string_view to_string(Status s) noexcept
{
    switch (s) {
    case Status::Proved: return "Proved";
    case Status::Refuted: return "Refuted";
    case Status::Unknown: return "Unknown";
    }
    return "?";
}

/// Three-valued answer to a semi-decidable question about an infinite object.
///
/// Proved and Refuted verdicts always carry a certificate that a separate
/// verifier can re-check. Unknown carries the horizon that was exhausted and
/// no certificate.
template <class Cert>
struct Verdict {
    Status status = Status::Unknown;
    std::optional<Cert> certificate;
    std::optional<std::uint64_t> horizon;
    std::string reason;

    static Verdict proved(Cert c, std::string why = {})
    {
        return Verdict{Status::Proved, std::move(c), std::nullopt, std::move(why)};
    }
    static Verdict refuted(Cert c, std::string why = {})
    {
        return Verdict{Status::Refuted, std::move(c), std::nullopt, std::move(why)};
    }
    static Verdict unknown(std::uint64_t h, std::string why = {})
    {
        return Verdict{Status::Unknown, std::nullopt, h, std::move(why)};
    }

    bool is_proved() const noexcept { return status == Status::Proved; }
    bool is_refuted() const noexcept { return status == Status::Refuted; }
    bool is_unknown() const noexcept { return status == Status::Unknown; }

    const Cert& cert() const { return certificate.value(); }
};

/// Carries a verdict across certificate types, keeping status, horizon and reason.
template <class To, class From, class F>
Verdict<To> map_verdict(const Verdict<From>& v, F&& convert)
{
    Verdict<To> out;
    out.status = v.status;
    out.horizon = v.horizon;
    out.reason = v.reason;
    if (v.certificate)
        out.certificate = convert(*v.certificate);
    return out;
}

} // namespace filterlab
