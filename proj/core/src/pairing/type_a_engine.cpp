#include "agencid/pairing/type_a_engine.hpp"

#include "rep_access.hpp"

#include <cassert>

namespace agencid::pairing {

namespace {

// r = 2^159 + 2^107 + 1, q = h*r - 1.
const char* const order_dec = "730750818665451621361119245571504901405976559617";
const char* const cofactor_dec =
    "9173994463960284009407307246722713807589154813570348936405191652878379992636624159111642953511581236854892";

struct Jacobian {
    mpz_class x;
    mpz_class y;
    mpz_class z;
    bool infinity = true;
};

class FieldOps {
public:
    explicit FieldOps(const mpz_class& q) : q_(q) {}

    void mod(mpz_class& v) const { mpz_mod(v.get_mpz_t(), v.get_mpz_t(), q_.get_mpz_t()); }

    mpz_class mul(const mpz_class& a, const mpz_class& b) const
    {
        mpz_class r = a * b;
        mod(r);
        return r;
    }
    mpz_class sqr(const mpz_class& a) const { return mul(a, a); }
    mpz_class sub(const mpz_class& a, const mpz_class& b) const
    {
        mpz_class r = a - b;
        mod(r);
        return r;
    }
    mpz_class add(const mpz_class& a, const mpz_class& b) const
    {
        mpz_class r = a + b;
        mod(r);
        return r;
    }
    mpz_class inv(const mpz_class& a) const
    {
        mpz_class r;
        if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), q_.get_mpz_t()) == 0) {
            throw Error(ErrorCode::invalid_argument, "field element has no inverse");
        }
        return r;
    }

    Jacobian dbl(const Jacobian& p) const
    {
        if (p.infinity || sgn(p.y) == 0) return {};
        mpz_class xx = sqr(p.x);
        mpz_class yy = sqr(p.y);
        mpz_class yyyy = sqr(yy);
        mpz_class zz = sqr(p.z);
        mpz_class s = mul(4 * p.x, yy);
        mpz_class m = add(3 * xx, sqr(zz));  // a = 1
        Jacobian r;
        r.infinity = false;
        r.x = sub(sqr(m), 2 * s);
        r.y = sub(mul(m, s - r.x), 8 * yyyy);
        r.z = mul(2 * p.y, p.z);
        return r;
    }

    Jacobian add_mixed(const Jacobian& p, const CurvePoint& a) const
    {
        if (a.infinity) return p;
        if (p.infinity) return {a.x, a.y, 1, false};
        mpz_class z1z1 = sqr(p.z);
        mpz_class u2 = mul(a.x, z1z1);
        mpz_class s2 = mul(a.y, mul(p.z, z1z1));
        mpz_class h = sub(u2, p.x);
        mpz_class rr = sub(s2, p.y);
        if (sgn(h) == 0) {
            return sgn(rr) == 0 ? dbl(p) : Jacobian{};
        }
        mpz_class hh = sqr(h);
        mpz_class hhh = mul(h, hh);
        mpz_class v = mul(p.x, hh);
        Jacobian r;
        r.infinity = false;
        r.x = sub(sub(sqr(rr), hhh), 2 * v);
        r.y = sub(mul(rr, v - r.x), mul(p.y, hhh));
        r.z = mul(p.z, h);
        return r;
    }

    CurvePoint to_affine(const Jacobian& p) const
    {
        if (p.infinity) return {};
        mpz_class zi = inv(p.z);
        mpz_class zi2 = sqr(zi);
        return {mul(p.x, zi2), mul(p.y, mul(zi2, zi)), false};
    }

private:
    const mpz_class& q_;
};

}  // namespace

TypeAEngine::TypeAEngine()
    : PairingEngine(mpz_class(order_dec))
    , h_(cofactor_dec)
{
    q_ = h_ * scalars().order() - 1;
    sqrt_exponent_ = (q_ + 1) / 4;

    // Deterministic generator: cofactor-cleared lift of the first x = 1, 2, ...
    // that lies on the curve.
    FieldOps f(q_);
    for (mpz_class x = 1;; ++x) {
        mpz_class rhs = f.add(f.mul(f.sqr(x), x), x);
        auto y = sqrt(rhs);
        if (!y) continue;
        CurvePoint g = multiply(h_, CurvePoint{x, *y, false});
        if (!g.infinity) {
            generator_ = g;
            break;
        }
    }
    gt_generator_ = TargetElement(tate(generator_, generator_));
}

std::string TypeAEngine::describe() const
{
    return "Type-A supersingular y^2 = x^3 + x, 512-bit q, 160-bit r, embedding degree 2 ("
        + std::to_string(default_security_level) + "-bit security)";
}

bool TypeAEngine::on_curve(const CurvePoint& p) const
{
    if (p.infinity) return true;
    if (sgn(p.x) < 0 || p.x >= q_ || sgn(p.y) < 0 || p.y >= q_) return false;
    FieldOps f(q_);
    return f.sqr(p.y) == f.add(f.mul(f.sqr(p.x), p.x), p.x);
}

std::optional<mpz_class> TypeAEngine::sqrt(const mpz_class& a) const
{
    mpz_class s;
    mpz_powm(s.get_mpz_t(), a.get_mpz_t(), sqrt_exponent_.get_mpz_t(), q_.get_mpz_t());
    FieldOps f(q_);
    mpz_class aa = a;
    f.mod(aa);
    if (f.sqr(s) != aa) return std::nullopt;
    return s;
}

CurvePoint TypeAEngine::affine_add(const CurvePoint& a, const CurvePoint& b) const
{
    if (a.infinity) return b;
    if (b.infinity) return a;
    FieldOps f(q_);
    mpz_class lambda;
    if (a.x == b.x) {
        if (a.y != b.y || sgn(a.y) == 0) return {};
        lambda = f.mul(f.add(3 * f.sqr(a.x), 1), f.inv(f.mul(2, a.y)));
    } else {
        lambda = f.mul(f.sub(b.y, a.y), f.inv(f.sub(b.x, a.x)));
    }
    mpz_class x3 = f.sub(f.sqr(lambda), a.x + b.x);
    mpz_class y3 = f.sub(f.mul(lambda, a.x - x3), a.y);
    return {x3, y3, false};
}

CurvePoint TypeAEngine::multiply(const mpz_class& k, const CurvePoint& p) const
{
    if (p.infinity || sgn(k) == 0) return {};
    FieldOps f(q_);
    Jacobian acc;
    for (auto bit = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
        acc = f.dbl(acc);
        if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            acc = f.add_mixed(acc, p);
        }
    }
    return f.to_affine(acc);
}

Fp2 TypeAEngine::fp2_mul(const Fp2& a, const Fp2& b) const
{
    FieldOps f(q_);
    mpz_class t0 = a.re * b.re;
    mpz_class t1 = a.im * b.im;
    mpz_class im = (a.re + a.im) * (b.re + b.im) - t0 - t1;
    mpz_class re = t0 - t1;
    f.mod(re);
    f.mod(im);
    return {re, im};
}

Fp2 TypeAEngine::fp2_sqr(const Fp2& a) const
{
    FieldOps f(q_);
    mpz_class re = (a.re + a.im) * (a.re - a.im);
    mpz_class im = 2 * a.re * a.im;
    f.mod(re);
    f.mod(im);
    return {re, im};
}

Fp2 TypeAEngine::fp2_pow(const Fp2& a, const mpz_class& e) const
{
    Fp2 acc{1, 0};
    for (auto bit = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
        acc = fp2_sqr(acc);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            acc = fp2_mul(acc, a);
        }
    }
    return acc;
}

Fp2 TypeAEngine::fp2_inv(const Fp2& a) const
{
    FieldOps f(q_);
    mpz_class ninv = f.inv(f.add(f.sqr(a.re), f.sqr(a.im)));
    return {f.mul(a.re, ninv), f.sub(0, f.mul(a.im, ninv))};
}

Fp2 TypeAEngine::tate(const CurvePoint& p, const CurvePoint& q) const
{
    if (p.infinity || q.infinity) return {1, 0};
    FieldOps f(q_);
    const mpz_class& r = scalars().order();

    // Lines through T evaluated at (-xq, i*yq); vertical lines lie in F_q and
    // vanish under the final exponentiation, so they are skipped.
    auto line = [&](const mpz_class& lambda, const CurvePoint& t) {
        return Fp2{f.sub(f.mul(lambda, q.x + t.x), t.y), q.y};
    };

    Fp2 acc{1, 0};
    CurvePoint t = p;
    for (auto bit = static_cast<long>(mpz_sizeinbase(r.get_mpz_t(), 2)) - 2; bit >= 0; --bit) {
        mpz_class lambda = f.mul(f.add(3 * f.sqr(t.x), 1), f.inv(f.mul(2, t.y)));
        acc = fp2_mul(fp2_sqr(acc), line(lambda, t));
        mpz_class x3 = f.sub(f.sqr(lambda), 2 * t.x);
        t.y = f.sub(f.mul(lambda, t.x - x3), t.y);
        t.x = x3;

        if (mpz_tstbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) {
            if (t.x == p.x) {
                // t = -p: only reached on the final bit, where t + p = O.
                assert(bit == 0);
                t = {};
                continue;
            }
            lambda = f.mul(f.sub(p.y, t.y), f.inv(f.sub(p.x, t.x)));
            acc = fp2_mul(acc, line(lambda, t));
            mpz_class x4 = f.sub(f.sqr(lambda), t.x + p.x);
            t.y = f.sub(f.mul(lambda, t.x - x4), t.y);
            t.x = x4;
        }
    }

    // acc^((q^2 - 1) / r) = (conj(acc) / acc)^h since acc^q = conj(acc).
    Fp2 conj{acc.re, f.sub(0, acc.im)};
    return fp2_pow(fp2_mul(conj, fp2_inv(acc)), h_);
}

SourceElement::Rep TypeAEngine::do_add(const SourceElement::Rep& a, const SourceElement::Rep& b) const
{
    return affine_add(rep_as<CurvePoint>(a), rep_as<CurvePoint>(b));
}

SourceElement::Rep TypeAEngine::do_neg(const SourceElement::Rep& a) const
{
    const auto& p = rep_as<CurvePoint>(a);
    if (p.infinity || sgn(p.y) == 0) return p;
    return CurvePoint{p.x, q_ - p.y, false};
}

SourceElement::Rep TypeAEngine::do_scalar_mul(const mpz_class& k, const SourceElement::Rep& x) const
{
    mpz_class reduced;
    mpz_mod(reduced.get_mpz_t(), k.get_mpz_t(), scalars().order().get_mpz_t());
    return multiply(reduced, rep_as<CurvePoint>(x));
}

TargetElement::Rep TypeAEngine::do_pair(const SourceElement::Rep& a, const SourceElement::Rep& b) const
{
    return tate(rep_as<CurvePoint>(a), rep_as<CurvePoint>(b));
}

TargetElement::Rep TypeAEngine::do_gt_mul(const TargetElement::Rep& a, const TargetElement::Rep& b) const
{
    return fp2_mul(rep_as<Fp2>(a), rep_as<Fp2>(b));
}

TargetElement::Rep TypeAEngine::do_gt_inv(const TargetElement::Rep& a) const
{
    // G_T has norm 1, so the inverse is the conjugate.
    const auto& x = rep_as<Fp2>(a);
    FieldOps f(q_);
    return Fp2{x.re, f.sub(0, x.im)};
}

TargetElement::Rep TypeAEngine::do_gt_pow(const TargetElement::Rep& a, const mpz_class& k) const
{
    mpz_class reduced;
    mpz_mod(reduced.get_mpz_t(), k.get_mpz_t(), scalars().order().get_mpz_t());
    return fp2_pow(rep_as<Fp2>(a), reduced);
}

Bytes TypeAEngine::serialize(const SourceElement& x) const
{
    const auto& p = rep_as<CurvePoint>(x.rep());
    ByteWriter w;
    if (p.infinity) {
        w.u8(0x00);
        w.raw(Bytes(field_bytes, 0));
    } else {
        w.u8(mpz_tstbit(p.y.get_mpz_t(), 0) ? 0x03 : 0x02);
        w.raw(export_fixed(p.x, field_bytes));
    }
    return std::move(w).take();
}

Bytes TypeAEngine::serialize(const TargetElement& x) const
{
    const auto& v = rep_as<Fp2>(x.rep());
    ByteWriter w;
    w.raw(export_fixed(v.re, field_bytes));
    w.raw(export_fixed(v.im, field_bytes));
    return std::move(w).take();
}

SourceElement TypeAEngine::deserialize_source(ByteView bytes, GroupTag tag) const
{
    if (bytes.size() != source_encoded_size()) {
        throw Error(ErrorCode::invalid_encoding, "curve point must be 65 bytes");
    }
    const std::uint8_t flag = bytes[0];
    mpz_class x = import_unsigned(bytes.subspan(1));
    if (flag == 0x00) {
        if (sgn(x) != 0) throw Error(ErrorCode::invalid_encoding, "malformed point at infinity");
        return identity(tag);
    }
    if (flag != 0x02 && flag != 0x03) {
        throw Error(ErrorCode::invalid_encoding, "unknown point encoding flag");
    }
    if (x >= q_) throw Error(ErrorCode::invalid_encoding, "x coordinate not reduced");
    FieldOps f(q_);
    auto y = sqrt(f.add(f.mul(f.sqr(x), x), x));
    if (!y) throw Error(ErrorCode::invalid_encoding, "x coordinate not on the curve");
    if (static_cast<int>(mpz_tstbit(y->get_mpz_t(), 0)) != (flag & 1)) {
        *y = f.sub(0, *y);
    }
    CurvePoint p{x, *y, false};
    if (!multiply(scalars().order(), p).infinity) {
        throw Error(ErrorCode::invalid_encoding, "point outside the prime-order subgroup");
    }
    return {tag, p};
}

TargetElement TypeAEngine::deserialize_target(ByteView bytes) const
{
    if (bytes.size() != target_encoded_size()) {
        throw Error(ErrorCode::invalid_encoding, "target element must be 128 bytes");
    }
    Fp2 v{import_unsigned(bytes.first(field_bytes)), import_unsigned(bytes.subspan(field_bytes))};
    if (v.re >= q_ || v.im >= q_) {
        throw Error(ErrorCode::invalid_encoding, "target coordinates not reduced");
    }
    if (!(fp2_pow(v, scalars().order()) == Fp2{1, 0})) {
        throw Error(ErrorCode::invalid_encoding, "target element outside the order-r subgroup");
    }
    return TargetElement(v);
}

}  // namespace agencid::pairing
