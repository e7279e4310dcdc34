package fixture.lease;

public class Si2 {
  public Lease obtainShardLease(ShardManager manager, String shardId) {
    Lease lease = manager.openLease(shardId);
    lease.activate();
    manager.scheduleRenewal(lease);
    manager.recordHolder(lease, shardId);
    LOG.info("acquired lease for shard");
    return lease;
  }
}
