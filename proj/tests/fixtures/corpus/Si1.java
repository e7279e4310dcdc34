package fixture.lease;

public class Si1 {
  public Lease acquireShardLease(ShardManager manager, String shardId) {
    LOG.info("acquired lease for shard");
    Lease lease = manager.openLease(shardId);
    lease.activate();
    LOG.debug("holder renewal timer started");
    manager.scheduleRenewal(lease);
    manager.recordHolder(lease, shardId);
    LOG.debug("holder state persisted");
    return lease;
  }
}
