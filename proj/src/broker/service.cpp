#include "interop/broker/service.hpp"

#include <system_error>

#include "interop/transport/http_transport.hpp"

namespace interop::broker {

BrokerService::BrokerService(BrokerConfig config, std::shared_ptr<transport::Transport> transport,
                             const Clock* clock)
    : config_(std::move(config)),
      transport_(transport ? std::move(transport)
                           : std::make_shared<transport::HttpTransport>()),
      clock_(clock ? *clock : steady_) {}

BrokerService::~BrokerService() { stop(); }

void BrokerService::start() {
  if (running_) return;
  config_.validate();
  std::error_code ec;
  std::filesystem::create_directories(config_.data_dir, ec);
  if (ec) throw std::runtime_error("cannot create data dir " + config_.data_dir.string());

  log_.emplace(ledger::BlockLog::open(log_path(), config_.fsync));
  BrokerOptions options;
  options.capacity = config_.capacity;
  options.contracts = config_.contracts;
  options.notifier = config_.notifier;
  options.parallel_delivery = config_.parallel_delivery;
  broker_ = std::make_unique<Broker>(options, transport_, clock_, Broker::Drive::Threaded, &*log_);
  broker_->restore(log_->loaded().blocks);
  broker_->start();

  if (broker_->ledger().height() == 0) {
    auto init = [&](ledger::ContractId contract, Bytes samples) {
      ledger::Transaction tx;
      tx.kind = ledger::TxKind::Invoke;
      tx.contract = contract;
      tx.operation = "InitLedger";
      tx.args = {std::move(samples)};
      const auto r = broker_->call(std::move(tx));
      if (r.status != ledger::TxStatus::Committed) {
        throw std::runtime_error("InitLedger failed: " + r.reason);
      }
    };
    init(ledger::ContractId::Connector, contracts::encode_chain_samples(config_.sample));
    init(ledger::ContractId::Topics, contracts::encode_topic_samples(config_.sample));
  }

  try {
    transport_->serve(config_.listen,
                      [this](const transport::WireMessage& m) { return broker_->handle_request(m); });
  } catch (...) {
    broker_->stop();
    throw;
  }
  running_ = true;
}

void BrokerService::stop() {
  if (!running_) return;
  transport_->unserve(config_.listen);
  broker_->stop();
  running_ = false;
}

}  // namespace interop::broker
