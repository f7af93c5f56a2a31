#pragma once

// Coroutine plumbing for agent controllers. A controller's behaviour is written as
// ordinary sequential procedures; every `co_await act(...)` emits one Action and
// suspends until the next perception arrives.

#include "bhs/agent.hpp"

#include <coroutine>
#include <cstdint>
#include <exception>
#include <source_location>
#include <utility>
#include <vector>

namespace bhs {

/// FNV-1a style accumulator used for state fingerprints and trace hashes.
class Fingerprint {
public:
    template <typename... Ts>
    Fingerprint& mix(Ts... values) {
        (mix_one(static_cast<std::uint64_t>(values)), ...);
        return *this;
    }
    std::uint64_t value() const noexcept { return h_; }

private:
    void mix_one(std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h_ ^= (v >> (8 * b)) & 0xffu;
            h_ *= 0x100000001b3ull;
        }
    }
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

/// Base class for controllers written as coroutine procedures.
class Program : public Controller {
public:
    class Proc {
    public:
        struct promise_type {
            std::coroutine_handle<> continuation;
            std::exception_ptr error;

            Proc get_return_object() {
                return Proc{std::coroutine_handle<promise_type>::from_promise(*this)};
            }
            std::suspend_always initial_suspend() noexcept { return {}; }
            struct FinalAwaiter {
                bool await_ready() noexcept { return false; }
                std::coroutine_handle<> await_suspend(
                    std::coroutine_handle<promise_type> h) noexcept {
                    auto next = h.promise().continuation;
                    return next ? next : std::noop_coroutine();
                }
                void await_resume() noexcept {}
            };
            FinalAwaiter final_suspend() noexcept { return {}; }
            void return_void() noexcept {}
            void unhandled_exception() noexcept { error = std::current_exception(); }
        };

        Proc() = default;
        explicit Proc(std::coroutine_handle<promise_type> h) : h_(h) {}
        Proc(Proc&& o) noexcept : h_(std::exchange(o.h_, {})) {}
        Proc& operator=(Proc&& o) noexcept {
            if (this != &o) {
                reset();
                h_ = std::exchange(o.h_, {});
            }
            return *this;
        }
        Proc(const Proc&) = delete;
        Proc& operator=(const Proc&) = delete;
        ~Proc() { reset(); }

        std::coroutine_handle<promise_type> handle() const noexcept { return h_; }

    private:
        void reset() {
            if (h_) h_.destroy();
            h_ = {};
        }
        std::coroutine_handle<promise_type> h_;
    };

    Action step(const Perception& p) final {
        percept_ = p;
        if (!started_) {
            started_ = true;
            top_ = main();
            leaf_ = top_.handle();
        }
        if (!leaf_ || top_.handle().done())
            throw ProtocolViolation(std::string(name()) + ": stepped after its program ended");
        have_pending_ = false;
        leaf_.resume();
        if (top_.handle().done()) {
            if (auto err = top_.handle().promise().error) std::rethrow_exception(err);
            if (!have_pending_)
                throw ProtocolViolation(std::string(name()) + ": program ended without declaring");
        }
        if (!have_pending_)
            throw ProtocolViolation(std::string(name()) + ": no action produced");
        return pending_;
    }

    std::uint64_t state_key() const final {
        Fingerprint f;
        for (auto line : call_sites_) f.mix(line);
        f.mix(0xffffu, act_line_, memory_fingerprint());
        return f.value();
    }

protected:
    virtual Proc main() = 0;
    /// Hash of every mutable field the program keeps between time units.
    virtual std::uint64_t memory_fingerprint() const = 0;

    const Perception& seen() const noexcept { return percept_; }

    struct ActAwaiter {
        Program* self;
        Action action;
        std::uint32_t line;

        bool await_ready() const noexcept { return false; }
        void await_suspend(std::coroutine_handle<> h) noexcept {
            self->leaf_ = h;
            self->on_action(action);
            self->pending_ = action;
            self->have_pending_ = true;
            self->act_line_ = line;
        }
        const Perception& await_resume() {
            self->on_perception(self->percept_);
            return self->percept_;
        }
    };

    /// Emit one action; resumes with the perception of the following time unit.
    ActAwaiter act(Action a, std::source_location loc = std::source_location::current()) {
        return ActAwaiter{this, a, loc.line()};
    }

    struct CallAwaiter {
        Program* self;
        Proc proc;
        std::uint32_t line;

        bool await_ready() const noexcept { return false; }
        std::coroutine_handle<> await_suspend(std::coroutine_handle<> parent) noexcept {
            proc.handle().promise().continuation = parent;
            self->call_sites_.push_back(line);
            return proc.handle();
        }
        void await_resume() {
            self->call_sites_.pop_back();
            if (auto err = proc.handle().promise().error) std::rethrow_exception(err);
        }
    };

    /// Run a sub-procedure to completion.
    CallAwaiter call(Proc p, std::source_location loc = std::source_location::current()) {
        return CallAwaiter{this, std::move(p), loc.line()};
    }

    /// Hook run on every fresh perception, before the procedure sees it. Throwing from
    /// here unwinds the procedure stack to the nearest handler.
    virtual void on_perception(const Perception&) {}
    /// Hook run on every action as it is emitted.
    virtual void on_action(const Action&) {}

private:
    Perception percept_{};
    Action pending_{};
    bool have_pending_ = false;
    bool started_ = false;
    Proc top_;
    std::coroutine_handle<> leaf_;
    std::vector<std::uint32_t> call_sites_;
    std::uint32_t act_line_ = 0;
};

}  // namespace bhs
